#include "capgen/parallel.hpp"

#include <exception>
#include <thread>

namespace capgen {

std::vector<Capacity> generate_batch(std::size_t count, unsigned threads, std::uint64_t seed, const BatchJob& job) {
    if (threads == 0) threads = 1;
    std::vector<std::vector<Capacity>> parts(threads);
    std::vector<std::exception_ptr> errors(threads);
    auto run = [&](unsigned w) {
        try {
            std::size_t share = count / threads + (w < count % threads ? 1 : 0);
            Rng rng(derive_seed(seed, w));
            parts[w] = job(share, rng);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<Capacity> out;
    out.reserve(count);
    for (auto& p : parts) {
        for (auto& c : p) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace capgen
