#include "cdeal/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace cdeal {

namespace {

void check_samples(const std::vector<double>& samples) {
    if (samples.empty()) throw DomainError("no samples");
    for (double x : samples) {
        if (!std::isfinite(x)) throw DomainError("samples must be finite");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        if (count == 0.0) {
            *this = o;
            return;
        }
        const double n = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * (o.count / n);
        m2 += o.m2 + delta * delta * (count * o.count / n);
        count = n;
    }
};

double wvar_sorted(const std::vector<double>& sorted, const DistortionFunction& psi) {
    const double n = static_cast<double>(sorted.size());
    double risk = 0.0;
    double prev = 0.0;
    for (std::size_t t = 0; t < sorted.size(); ++t) {
        const double cur = t + 1 == sorted.size() ? 1.0 : psi(static_cast<double>(t + 1) / n);
        risk -= sorted[t] * (cur - prev);
        prev = cur;
    }
    return risk;
}

}  // namespace

double est_wvar(const std::vector<double>& samples, const WeightingMeasure& mu) {
    check_samples(samples);
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    return wvar_sorted(sorted, distortion(mu));
}

McEstimate est_beta_var(const std::vector<double>& samples, int alpha, int beta, long resamples,
                        std::uint64_t seed, int threads) {
    check_samples(samples);
    if (alpha < 1) throw DomainError("alpha must be at least 1");
    if (beta < 1 || beta > alpha) throw DomainError("beta must lie in [1, alpha]");
    if (resamples < 1) throw DomainError("need at least one resample");

    const long n_chunks = (resamples + kResampleChunk - 1) / kResampleChunk;
    std::vector<Moments> chunk_moments(static_cast<std::size_t>(n_chunks));
    const auto n = static_cast<std::uint64_t>(samples.size());

    auto run_chunk = [&](long c) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(c))));
        std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
        std::vector<double> draw(static_cast<std::size_t>(alpha));
        const long begin = c * kResampleChunk;
        const long end = std::min(resamples, begin + kResampleChunk);
        Moments m;
        for (long r = begin; r < end; ++r) {
            for (auto& v : draw) v = samples[pick(rng)];
            std::partial_sort(draw.begin(), draw.begin() + beta, draw.end());
            double s = 0.0;
            for (int i = 0; i < beta; ++i) s += draw[static_cast<std::size_t>(i)];
            m.add(beta == 1 ? -s : -s / beta);
        }
        chunk_moments[static_cast<std::size_t>(c)] = m;
    };

    const long workers = std::clamp<long>(threads, 1, n_chunks);
    if (workers == 1) {
        for (long c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (long w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (long c = w; c < n_chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }

    Moments total;
    for (const auto& m : chunk_moments) total.merge(m);
    McEstimate out;
    out.estimate = total.mean;
    out.std_error = total.count > 1.0 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
    return out;
}

McEstimate est_alpha_var(const std::vector<double>& samples, int alpha, long resamples,
                         std::uint64_t seed, int threads) {
    return est_beta_var(samples, alpha, 1, resamples, seed, threads);
}

ContributionEstimate est_risk_contribution(const std::vector<std::pair<double, double>>& pairs,
                                           const WeightingMeasure& mu) {
    if (pairs.empty()) throw DomainError("no samples");
    for (const auto& [x, w] : pairs) {
        if (!std::isfinite(x) || !std::isfinite(w)) throw DomainError("samples must be finite");
    }
    const auto psi = distortion(mu);
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pairs[a].second < pairs[b].second; });
    const double n = static_cast<double>(pairs.size());
    ContributionEstimate out;
    double prev = 0.0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        const double cur = t + 1 == order.size() ? 1.0 : psi(static_cast<double>(t + 1) / n);
        out.value += pairs[order[t]].first * (cur - prev);
        prev = cur;
    }
    // A tie block covering CDF levels [a, b] is harmless when Psi is linear there.
    for (std::size_t s = 0; s < order.size();) {
        std::size_t e = s + 1;
        while (e < order.size() && pairs[order[e]].second == pairs[order[s]].second) ++e;
        if (e - s > 1) {
            const double a = static_cast<double>(s) / n;
            const double b = static_cast<double>(e) / n;
            for (double k : psi.xs()) {
                if (k > a + 1e-14 && k < b - 1e-14) out.unique = false;
            }
        }
        s = e;
    }
    return out;
}

double est_factor_risk(const std::vector<std::pair<double, double>>& pairs,
                       const WeightingMeasure& mu, int bins) {
    if (pairs.empty()) throw DomainError("no samples");
    if (bins < 1) throw DomainError("bin count must be at least 1");
    if (static_cast<std::size_t>(bins) > pairs.size()) throw DomainError("more bins than samples");
    for (const auto& [x, y] : pairs) {
        if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("samples must be finite");
    }
    const std::size_t t_count = pairs.size();
    std::vector<std::size_t> order(t_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pairs[a].second < pairs[b].second; });

    std::vector<double> fitted(t_count);
    std::size_t start = 0;
    for (int k = 1; k <= bins && start < t_count; ++k) {
        std::size_t end = k == bins ? t_count : (t_count * static_cast<std::size_t>(k)) / static_cast<std::size_t>(bins);
        end = std::max(end, start + 1);
        while (end < t_count && pairs[order[end]].second == pairs[order[end - 1]].second) ++end;
        double sum = 0.0;
        for (std::size_t i = start; i < end; ++i) sum += pairs[order[i]].first;
        const double mean = sum / static_cast<double>(end - start);
        for (std::size_t i = start; i < end; ++i) fitted[order[i]] = mean;
        start = end;
    }
    return est_wvar(fitted, mu);
}

double est_upper_price(const std::vector<double>& claim,
                       const std::vector<std::vector<double>>& candidates,
                       const std::vector<WeightingMeasure>& groups) {
    check_samples(claim);
    if (groups.empty()) throw DomainError("at least one group is required");
    std::vector<std::vector<double>> hedges = candidates;
    if (hedges.empty()) hedges.emplace_back(claim.size(), 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : hedges) {
        if (x.size() != claim.size()) throw ShapeError("hedge candidate and claim sample counts differ");
        std::vector<double> diff(claim.size());
        for (std::size_t t = 0; t < claim.size(); ++t) diff[t] = x[t] - claim[t];
        for (const auto& mu : groups) best = std::min(best, est_wvar(diff, mu));
    }
    return best;
}

}  // namespace cdeal
