#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace lpkit::detail {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape and kept for the process lifetime.
class PlanCache {
public:
    fftw_plan get(int dim, std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(dim, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t total = dim == 1 ? n : n * n;
        fftw_complex* buffer = fftw_alloc_complex(total);
        const int rank_n[2] = {static_cast<int>(n), static_cast<int>(n)};
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = fftw_plan_dft(dim, rank_n, buffer, buffer,
                                       sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(buffer);
        if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dim, std::size_t n, int sign) {
    fftw_plan plan = cache().get(dim, n, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace lpkit::detail
