#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>

#include "nlskdv/error.hpp"
#include "nlskdv/grid.hpp"

namespace nlskdv::fft {
namespace {

// FFTW's planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

class Workspace {
 public:
  explicit Workspace(int n)
      : n_(n),
        in_(fftw_alloc_complex(static_cast<size_t>(n))),
        out_(fftw_alloc_complex(static_cast<size_t>(n))) {
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(n, in_.get(), out_.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, in_.get(), out_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  ~Workspace() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  void run(std::span<const cdouble> in, std::span<cdouble> out, bool forward) {
    auto* buf_in = reinterpret_cast<cdouble*>(in_.get());
    std::copy(in.begin(), in.end(), buf_in);
    fftw_execute(forward ? fwd_ : bwd_);
    auto* buf_out = reinterpret_cast<const cdouble*>(out_.get());
    if (forward) {
      std::copy(buf_out, buf_out + n_, out.begin());
    } else {
      const double scale = 1.0 / n_;
      for (int j = 0; j < n_; ++j) out[j] = buf_out[j] * scale;
    }
  }

 private:
  int n_;
  std::unique_ptr<fftw_complex, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan fwd_{};
  fftw_plan bwd_{};
};

Workspace& workspace(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Workspace>(n);
  return *slot;
}

void check_sizes(std::span<const cdouble> in, std::span<cdouble> out) {
  if (in.size() != out.size() || in.empty()) {
    throw ValidationError("fft: input and output sizes differ or are empty");
  }
}

}  // namespace

void forward(std::span<const cdouble> in, std::span<cdouble> out) {
  check_sizes(in, out);
  workspace(static_cast<int>(in.size())).run(in, out, true);
}

void inverse(std::span<const cdouble> in, std::span<cdouble> out) {
  check_sizes(in, out);
  workspace(static_cast<int>(in.size())).run(in, out, false);
}

}  // namespace nlskdv::fft
