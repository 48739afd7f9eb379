#include "dmapper/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/special_functions/erf.hpp>

#include "dmapper/error.hpp"
#include "dmapper/random.hpp"

namespace dmapper {

namespace {

constexpr double kDegenerateWeight = 1e-8;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

struct Params {
    std::vector<double> w, mu, sd;
};

// Distinct values with multiplicities; bootstrap resamples repeat many points.
struct Weighted {
    std::vector<double> x;
    std::vector<double> count;
    double total = 0.0;
};

Weighted compress(const std::vector<double>& sorted) {
    Weighted d;
    for (double v : sorted) {
        if (!d.x.empty() && d.x.back() == v) {
            d.count.back() += 1.0;
        } else {
            d.x.push_back(v);
            d.count.push_back(1.0);
        }
    }
    d.total = static_cast<double>(sorted.size());
    return d;
}

// exp(-50) is far below double resolution of the dominant term
constexpr double kNegligible = -50.0;

struct StepResult {
    double ll = 0.0;
    double max_row_err = 0.0;
    std::size_t worst = 0;  // distinct value with the lowest mixture density
    std::vector<double> nk, s1, s2;  // weighted sums of r, r*(x-c), r*(x-c)^2 with c = current mean
};

// E-step at p together with the sufficient statistics for the following M-step.
StepResult em_pass(const Weighted& d, const Params& p) {
    const std::size_t n = p.mu.size();
    std::vector<double> c(n), inv(n), t(n);
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = std::log(p.w[k]) - std::log(p.sd[k]) - kLogSqrt2Pi;
        inv[k] = 1.0 / p.sd[k];
    }
    StepResult out;
    out.nk.assign(n, 0.0);
    out.s1.assign(n, 0.0);
    out.s2.assign(n, 0.0);
    double worst_ld = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double x = d.x[i];
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double z = (x - p.mu[k]) * inv[k];
            t[k] = c[k] - 0.5 * z * z;
            mx = std::max(mx, t[k]);
        }
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = t[k] - mx;
            t[k] = e > kNegligible ? std::exp(e) : 0.0;
            s += t[k];
        }
        const double ld = mx + std::log(s);
        out.ll += d.count[i] * ld;
        if (ld < worst_ld) {
            worst_ld = ld;
            out.worst = i;
        }
        const double scale = d.count[i] / s;
        double rs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (t[k] == 0.0) continue;
            rs += t[k] / s;
            const double r = t[k] * scale;
            const double dx = x - p.mu[k];
            out.nk[k] += r;
            out.s1[k] += r * dx;
            out.s2[k] += r * dx * dx;
        }
        out.max_row_err = std::max(out.max_row_err, std::abs(rs - 1.0));
    }
    return out;
}

// Within-group spread around the nearest initial mean.
double pooled_sd(const Weighted& d, const std::vector<double>& mu, double floor) {
    double ss = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double m : mu) best = std::min(best, (d.x[i] - m) * (d.x[i] - m));
        ss += d.count[i] * best;
    }
    return std::sqrt(std::max(ss / d.total, floor));
}

// Lloyd iterations from the given means; each component then starts from its
// cluster's share and spread.
void kmeans_refine(const Weighted& d, Params& p, double floor) {
    const std::size_t n = p.mu.size();
    std::vector<std::size_t> assign(d.x.size(), n);
    for (int it = 0; it < 300; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < n; ++k) {
                if (std::abs(d.x[i] - p.mu[k]) < std::abs(d.x[i] - p.mu[best])) best = k;
            }
            if (best != assign[i]) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<double> cnt(n, 0.0), sum(n, 0.0);
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            cnt[assign[i]] += d.count[i];
            sum[assign[i]] += d.count[i] * d.x[i];
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (cnt[k] > 0.0) p.mu[k] = sum[k] / cnt[k];
        }
    }
    std::vector<double> cnt(n, 0.0), ss(n, 0.0);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double dx = d.x[i] - p.mu[assign[i]];
        cnt[assign[i]] += d.count[i];
        ss[assign[i]] += d.count[i] * dx * dx;
    }
    double wsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (cnt[k] > 0.0) {
            p.w[k] = cnt[k];
            p.sd[k] = std::sqrt(std::max(ss[k] / cnt[k], floor));
        } else {
            p.w[k] = 1.0;  // empty cluster keeps the pooled spread
        }
        wsum += p.w[k];
    }
    for (double& w : p.w) w /= wsum;
}

struct RunResult {
    Params params;
    double ll = -std::numeric_limits<double>::infinity();
};

RunResult run_em(const Weighted& d, Params p, const EmConfig& cfg, double floor, double init_sd,
                 EmTrace::Run* trace) {
    const std::size_t n = p.mu.size();
    double prev = -std::numeric_limits<double>::infinity();
    double row_err = 0.0;
    bool converged = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
        const StepResult st = em_pass(d, p);
        row_err = std::max(row_err, st.max_row_err);
        if (trace) trace->log_likelihood.push_back(st.ll);
        if (!std::isfinite(st.ll)) return {std::move(p), st.ll};
        if (it > 0 && std::abs(st.ll - prev) < cfg.rel_tol * std::abs(prev)) {
            converged = true;
            prev = st.ll;
            break;
        }
        prev = st.ll;

        // M-step
        bool reinit = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (st.nk[k] / d.total < kDegenerateWeight) {
                // re-seed at the worst-explained point
                p.mu[k] = d.x[st.worst];
                p.sd[k] = init_sd;
                p.w[k] = 1.0 / static_cast<double>(n);
                reinit = true;
                continue;
            }
            const double shift = st.s1[k] / st.nk[k];
            const double var = st.s2[k] / st.nk[k] - shift * shift;
            p.w[k] = st.nk[k] / d.total;
            p.mu[k] += shift;
            p.sd[k] = std::sqrt(std::max(var, floor));
        }
        const double wsum = std::accumulate(p.w.begin(), p.w.end(), 0.0);
        for (double& w : p.w) w /= wsum;
        if (reinit && trace) trace->reinit_at.push_back(static_cast<std::size_t>(it));
    }
    if (trace) {
        trace->max_resp_row_error = row_err;
        trace->converged = converged;
    }
    // when max_iters ran out the parameters moved after the last E-step
    const double ll = converged ? prev : em_pass(d, p).ll;
    return {std::move(p), ll};
}

}  // namespace

std::string to_string(EmInit init) { return init == EmInit::KMeans ? "kmeans" : "quantile"; }

EmInit parse_em_init(const std::string& text) {
    if (text == "quantile") return EmInit::Quantile;
    if (text == "kmeans") return EmInit::KMeans;
    throw ConfigError("em.init must be 'quantile' or 'kmeans', got '" + text + "'");
}

void EmConfig::validate() const {
    if (max_iters < 1) throw ConfigError("em.max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw ConfigError("em.rel_tol must be > 0");
    if (variance_floor && !(*variance_floor > 0.0)) throw ConfigError("em.variance_floor must be > 0");
    if (n_init < 1) throw ConfigError("em.n_init must be >= 1");
}

GaussianMixture1D::GaussianMixture1D(std::vector<double> weights, std::vector<double> means,
                                     std::vector<double> stddevs) {
    const std::size_t n = means.size();
    if (n == 0 || weights.size() != n || stddevs.size() != n) {
        throw ConfigError("mixture needs equally sized, non-empty weight/mean/stddev vectors");
    }
    double wsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(weights[k] >= 0.0) || !std::isfinite(means[k]) || !(stddevs[k] > 0.0) || !std::isfinite(stddevs[k])) {
            throw NumericError("mixture component " + std::to_string(k) + " has invalid parameters");
        }
        wsum += weights[k];
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw NumericError("mixture weights do not sum to 1");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
    for (std::size_t k : order) {
        weights_.push_back(weights[k]);
        means_.push_back(means[k]);
        stddevs_.push_back(stddevs[k]);
    }
}

GaussianMixture1D fit_gmm(std::span<const double> values, std::size_t n, const EmConfig& cfg, EmTrace* trace) {
    cfg.validate();
    if (n == 0) throw ConfigError("mixture needs at least one component");
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("mixture input contains a non-finite value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const Weighted wd = compress(sorted);
    const std::vector<double>& distinct = wd.x;
    if (distinct.size() < n) {
        throw DataError("mixture with " + std::to_string(n) + " components needs at least that many distinct values, got " +
                        std::to_string(distinct.size()));
    }
    const double range = sorted.back() - sorted.front();
    double floor = cfg.variance_floor.value_or(1e-6 * range * range);
    if (!(floor > 0.0)) floor = 1e-12;
    const std::size_t m = sorted.size();

    if (trace) *trace = EmTrace{};

    if (n == 1) {
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(m);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(std::max(ss / static_cast<double>(m), floor));
        GaussianMixture1D g({1.0}, {mean}, {sd});
        if (trace) {
            EmTrace::Run run;
            run.log_likelihood.push_back(log_likelihood(g, values));
            run.converged = true;
            trace->runs.push_back(std::move(run));
        }
        return g;
    }

    RunResult best;
    std::size_t best_idx = 0;
    bool have_best = false;
    for (int r = 0; r < cfg.n_init; ++r) {
        Params p;
        p.w.assign(n, 1.0 / static_cast<double>(n));
        if (r == 0) {
            for (std::size_t k = 0; k < n; ++k) {
                // empirical quantile at (k + 0.5) / n, linear interpolation
                const double pos = (static_cast<double>(k) + 0.5) / static_cast<double>(n) * static_cast<double>(m - 1);
                const auto lo = static_cast<std::size_t>(std::floor(pos));
                const auto hi = std::min(lo + 1, m - 1);
                const double t = pos - static_cast<double>(lo);
                p.mu.push_back(sorted[lo] + t * (sorted[hi] - sorted[lo]));
            }
        } else {
            std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            std::vector<std::size_t> idx(distinct.size());
            std::iota(idx.begin(), idx.end(), 0);
            for (std::size_t k = 0; k < n; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
                std::swap(idx[k], idx[pick(rng)]);
                p.mu.push_back(distinct[idx[k]]);
            }
            std::sort(p.mu.begin(), p.mu.end());
        }
        const double sd0 = pooled_sd(wd, p.mu, floor);
        p.sd.assign(n, sd0);
        if (cfg.init == EmInit::KMeans) kmeans_refine(wd, p, floor);

        EmTrace::Run* run_trace = nullptr;
        if (trace) run_trace = &trace->runs.emplace_back();
        RunResult res = run_em(wd, std::move(p), cfg, floor, sd0, run_trace);
        if (!std::isfinite(res.ll)) continue;
        if (!have_best || res.ll > best.ll) {
            best = std::move(res);
            best_idx = static_cast<std::size_t>(r);
            have_best = true;
        }
    }
    if (!have_best) throw NumericError("EM produced a non-finite log-likelihood in every restart");
    if (trace) trace->best_run = best_idx;
    return GaussianMixture1D(std::move(best.params.w), std::move(best.params.mu), std::move(best.params.sd));
}

double log_likelihood(const GaussianMixture1D& gmm, std::span<const double> values) {
    const std::size_t n = gmm.n_components();
    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = std::log(gmm.weights()[k]) - std::log(gmm.stddevs()[k]) - kLogSqrt2Pi;
    }
    std::vector<double> t(n);
    double ll = 0.0;
    for (double x : values) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double z = (x - gmm.means()[k]) / gmm.stddevs()[k];
            t[k] = c[k] - 0.5 * z * z;
            mx = std::max(mx, t[k]);
        }
        if (mx == -std::numeric_limits<double>::infinity()) return mx;
        double s = 0.0;
        for (double v : t) s += std::exp(v - mx);
        ll += mx + std::log(s);
    }
    return ll;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

double component_quantile(const GaussianMixture1D& gmm, std::size_t i, double q) {
    if (i >= gmm.n_components()) throw ConfigError("component index out of range");
    return gmm.means()[i] + gmm.stddevs()[i] * normal_quantile(q);
}

double component_cdf(const GaussianMixture1D& gmm, std::size_t i, double x) {
    if (i >= gmm.n_components()) throw ConfigError("component index out of range");
    return normal_cdf((x - gmm.means()[i]) / gmm.stddevs()[i]);
}

}  // namespace dmapper
