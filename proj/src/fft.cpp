#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace pws::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(const GridSpec& g) {
  // Planning with FFTW_ESTIMATE never touches the buffer contents.
  std::vector<cplx> scratch(g.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (g.dim == 1) {
    const int n = static_cast<int>(g.n[0]);
    fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  } else {
    const int n0 = static_cast<int>(g.n[0]), n1 = static_cast<int>(g.n[1]);
    fwd_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, flags);
  }
  if (fwd_ == nullptr || bwd_ == nullptr) throw Error("FFTW planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void FftPlan::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(fwd_, p, p);
}

void FftPlan::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(bwd_, p, p);
}

const FftPlan& plan_for(const GridSpec& g) {
  using Key = std::tuple<int, std::size_t, std::size_t>;
  // The mutex must outlive the cache, whose plans lock it on destruction.
  std::mutex& mutex = planner_mutex();
  static std::map<Key, std::unique_ptr<FftPlan>> cache;
  const Key key{g.dim, g.n[0], g.dim == 2 ? g.n[1] : 1};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftPlan>(g)).first;
  return *it->second;
}

ExtendedFftPlan::ExtendedFftPlan(const GridSpec& g) {
  std::vector<lcplx> scratch(g.size());
  auto* buf = reinterpret_cast<fftwl_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (g.dim == 1) {
    const int n = static_cast<int>(g.n[0]);
    fwd_ = fftwl_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftwl_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  } else {
    const int n0 = static_cast<int>(g.n[0]), n1 = static_cast<int>(g.n[1]);
    fwd_ = fftwl_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftwl_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, flags);
  }
  if (fwd_ == nullptr || bwd_ == nullptr) throw Error("FFTW planning failed");
}

ExtendedFftPlan::~ExtendedFftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftwl_destroy_plan(fwd_);
  if (bwd_) fftwl_destroy_plan(bwd_);
}

void ExtendedFftPlan::forward(lcplx* data) const {
  auto* p = reinterpret_cast<fftwl_complex*>(data);
  fftwl_execute_dft(fwd_, p, p);
}

void ExtendedFftPlan::backward(lcplx* data) const {
  auto* p = reinterpret_cast<fftwl_complex*>(data);
  fftwl_execute_dft(bwd_, p, p);
}

const ExtendedFftPlan& extended_plan_for(const GridSpec& g) {
  using Key = std::tuple<int, std::size_t, std::size_t>;
  std::mutex& mutex = planner_mutex();
  static std::map<Key, std::unique_ptr<ExtendedFftPlan>> cache;
  const Key key{g.dim, g.n[0], g.dim == 2 ? g.n[1] : 1};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<ExtendedFftPlan>(g)).first;
  return *it->second;
}

}  // namespace pws::detail
