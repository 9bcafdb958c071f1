#include "dlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace dlab {

namespace {

struct PlanKey {
  std::array<int, 4> n;
  int rank;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (rank != o.rank) return rank < o.rank;
    if (sign != o.sign) return sign < o.sign;
    return n < o.n;
  }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const Grid& g, int sign, fftw_complex* in,
                   fftw_complex* out) {
  PlanKey key{{0, 0, 0, 0}, g.d, sign};
  for (int a = 0; a < g.d; ++a) key.n[a] = g.n[a];
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // FFTW_UNALIGNED lets one cached plan serve any buffer pair via
  // fftw_execute_dft; ESTIMATE keeps planning deterministic and cheap.
  fftw_plan p = fftw_plan_dft(g.d, key.n.data(), in, out, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

void raw_dft(const Grid& g, const std::complex<double>* in,
             std::complex<double>* out, int sign) {
  auto* fin = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in));
  auto* fout = reinterpret_cast<fftw_complex*>(out);
  fftw_plan p = get_plan(g, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, fin,
                         fout);
  fftw_execute_dft(p, fin, fout);
}

}  // namespace dlab
