#include "cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "decoh/errors.hpp"

namespace decoh::cli {

bool is_sweep_parameter(const std::string& name) {
    return name == "lambda" || name == "k_sigma" || name == "delta" || name == "w" || name == "T";
}

void SweepSpec::validate() const {
    if (!is_sweep_parameter(parameter))
        throw DomainError("unknown sweep parameter '" + parameter + "' (lambda, k_sigma, delta, w, T)");
    if (points < 2)
        throw DomainError("a sweep needs at least 2 points");
    if (!std::isfinite(start) || !std::isfinite(stop))
        throw DomainError("sweep range must be finite");
    if (scale == SweepScale::log && !(start > 0.0 && stop > 0.0))
        throw DomainError("log-scale sweep requires a positive range");
}

std::vector<double> SweepSpec::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(points));
    const double last = points - 1;
    for (int i = 0; i < points; ++i) {
        const double f = i / last;
        if (scale == SweepScale::log)
            v[static_cast<std::size_t>(i)] = std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
        else
            v[static_cast<std::size_t>(i)] = start + f * (stop - start);
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("DECOH_NUM_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<Cell>> parallel_rows(std::size_t n, unsigned threads,
                                             const std::function<std::vector<Cell>(std::size_t)>& row) {
    std::vector<std::vector<Cell>> out(n);
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = row(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace decoh::cli
