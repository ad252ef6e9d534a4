// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfact/bounds.hpp"
#include "opfact/config.hpp"
#include "opfact/covering.hpp"
#include "opfact/experiment.hpp"
#include "opfact/factorize.hpp"
#include "opfact/infinilayers.hpp"
#include "opfact/linalg.hpp"
#include "opfact/netcore.hpp"
#include "opfact/random.hpp"

using namespace opfact;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = v.ok && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %2d %-34s %s (%.2fs, limit %.0fs%s)\n", pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs,
                limit_seconds, in_time ? "" : ", too slow");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

const BoxDomain unit{{0.0}, {1.0}};

std::vector<double> uniform_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

Matrix uniform_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Matrix m(r, c);
    for (double& x : m.data()) x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    return m;
}

std::vector<SampledFunction> lipschitz_functions(const GridPtr& g, std::size_t n, std::uint64_t seed) {
    std::vector<SampledFunction> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_lipschitz(LipschitzClass{unit, 1.0, 1.0}, g, derive_seed(seed, 7, i)));
    return out;
}

// Cumulative trapezoid on a 1-D grid, written out independently of the operators module.
std::vector<double> antiderivative_oracle(const SampledFunction& f) {
    const auto x = f.grid()->coords(0);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

double loss_oracle(const TwoLayerNet& net, const Dataset& d) {
    double total = 0.0;
    for (std::size_t s = 0; s < d.size(); ++s) {
        const auto y = forward(net, d.inputs[s]);
        double sq = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) sq += (y[k] - d.targets[s][k]) * (y[k] - d.targets[s][k]);
        total += sq / static_cast<double>(y.size());
    }
    return total / static_cast<double>(d.size());
}

ExperimentConfig pipeline_config(std::uint64_t seed) {
    ExperimentConfig c;  // antiderivative on [0,1], lambda = amplitude = 1, eps = 0.2, theorem4 radii
    c.widths = {4, 16, 64};
    c.restarts = 3;
    c.seed = seed;
    return c;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> pipeline_reports;

}  // namespace

int main() {
    criterion(1, "diagram (b) exactness", 5.0, [] {
        std::mt19937_64 rng(1);
        double worst = 0.0;
        for (Interp rule : {Interp::nearest, Interp::multilinear}) {
            for (double gamma : {0.25, 0.1, 0.01}) {  // M = 2, 5, 50
                const SampleFactorization sf(unit, gamma, rule, 2);
                for (int t = 0; t < 100; ++t) {
                    const auto v = uniform_vector(sf.order(), rng);
                    const auto back = sf.delta(sf.delta_star(v));
                    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(back[i] - v[i]));
                }
            }
        }
        return Verdict{worst <= 1e-12, fmt("max |Delta Delta* v - v| = %.3g", worst)};
    });

    criterion(2, "nearest reconstruction <= lambda gamma", 30.0, [] {
        double worst_slack = -INFINITY;
        std::string detail;
        for (double gamma : {0.25, 0.1, 0.01}) {
            const SampleFactorization sf(unit, gamma, Interp::nearest, 1001);
            const auto fs = lipschitz_functions(sf.grid(), 200, 2);
            double err = 0.0;
            for (const auto& f : fs) err = std::max(err, sup_distance(f, sf.delta_star(sf.delta(f))));
            worst_slack = std::max(worst_slack, err - gamma);
            detail += fmt("g=%g:%.4g ", gamma, err);
        }
        return Verdict{worst_slack <= 1e-9, detail};
    });

    criterion(3, "factorization floor, eps = 0.2", 60.0, [] {
        const ExperimentConfig c = pipeline_config(0);
        const Radii radii = resolve_radii(c);
        const SampleFactorization sf(unit, radii.gamma, c.interp, 10 * radii.m + 1);
        const auto fs = lipschitz_functions(sf.grid(), 100, 3);
        double err = 0.0;
        // Sample, reconstruct, integrate, sample, reconstruct; compare with the exact image.
        for (const auto& f : fs) {
            const SampledFunction truth(sf.grid(), antiderivative_oracle(f));
            const SampledFunction through(sf.grid(), antiderivative_oracle(sf.delta_star(sf.delta(f))));
            err = std::max(err, sup_distance(sf.delta_star(sf.delta(through)), truth));
        }
        const double lib = map_factorization_error(make_operator(c), sf, sf, fs);
        const bool ok = radii.m == 40 && std::abs(radii.gamma - 0.0125) <= 1e-15 && err <= 0.2 &&
                        std::abs(lib - err) <= 1e-12;
        return Verdict{ok, fmt("M=%g floor=%.4g", static_cast<double>(radii.m), err)};
    });

    criterion(4, "unit-count bound calculator", 1.0, [] {
        bool ok = corollary5_bound(1, 1, 1, 0.1, 1, Corollary5Variant::as_stated) == 322;
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int mismatches = 0;
        for (int t = 0; t < 50; ++t) {
            const double diam = 0.5 + 2.0 * u(rng), lam = 0.1 + 3.0 * u(rng), Lam = 0.1 + 3.0 * u(rng);
            const double eps = 0.05 + u(rng);
            const std::size_t d = 1 + t % 3;
            const double psi = psi_theorem4(ModulusSpec::lipschitz(Lam), eps);
            const auto composed = box_covering_bound(diam, cover_radius_theorem4(psi, lam, eps), d);
            if (corollary5_bound(diam, lam, Lam, eps, d, Corollary5Variant::derived) != composed) ++mismatches;
        }
        ok = ok && mismatches == 0;
        bool monotone = true;
        for (auto variant : {Corollary5Variant::as_stated, Corollary5Variant::derived}) {
            std::uint64_t prev = UINT64_MAX;
            for (double eps = 0.01; eps <= 2.0; eps += 0.01) {
                const auto b = corollary5_bound(1.3, 0.7, 1.9, eps, 2, variant);
                monotone = monotone && b <= prev;
                prev = b;
            }
        }
        return Verdict{ok && monotone, fmt("sweep mismatches=%g monotone=%g", mismatches, monotone ? 1.0 : 0.0)};
    });

    criterion(5, "gradient vs central differences", 10.0, [] {
        std::mt19937_64 rng(5);
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto net = net_new(4, 7, 3, Activation::tanh, 500 + s);
            Dataset d;
            for (int i = 0; i < 5; ++i) {
                d.inputs.push_back(uniform_vector(4, rng));
                d.targets.push_back(uniform_vector(3, rng));
            }
            const auto g = loss_grad(net, d).gradient;
            auto p = net.parameters();
            TwoLayerNet probe = net;
            const double h = 1e-5;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double keep = p[i];
                p[i] = keep + h;
                probe.set_parameters(p);
                const double up = loss_oracle(probe, d);
                p[i] = keep - h;
                probe.set_parameters(p);
                const double down = loss_oracle(probe, d);
                p[i] = keep;
                const double fd = (up - down) / (2.0 * h);
                const double scale = std::max(std::abs(fd), std::abs(g[i]));
                const double diff = std::abs(fd - g[i]);
                worst = std::max(worst, scale >= 1e-4 ? diff / scale : diff);
            }
            worst = std::max(worst, grad_check(net, d.inputs[0], d.targets[0], h));
        }
        return Verdict{worst <= 1e-6, fmt("max relative error %.3g", worst)};
    });

    criterion(6, "end-to-end pipeline, 5 seeds", 600.0, [] {
        std::vector<double> at4, at64;
        double best = INFINITY;
        pipeline_reports.clear();
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto out = run_experiment(pipeline_config(seed));
            pipeline_reports.push_back(report_to_json(out.report).dump(2));
            for (const auto& w : out.report.widths) {
                best = std::min(best, w.heldout_sup_err);
                if (w.width == 4) at4.push_back(w.heldout_sup_err);
                if (w.width == 64) at64.push_back(w.heldout_sup_err);
            }
        }
        const double m4 = median(at4), m64 = median(at64);
        return Verdict{m64 < m4 && best <= 0.2,
                       fmt("median N=4 %.4g, N=64 ", m4) + fmt("%.4g, best %.4g", m64, best)};
    });

    criterion(7, "mollifier convergence", 60.0, [] {
        const double gamma = 0.1;
        const SampleFactorization sf(unit, gamma, Interp::multilinear, 11);
        const auto grid = make_grid(unit, 2001);
        const auto fs = lipschitz_functions(grid, 20, 7);
        std::mt19937_64 rng(7);
        const Matrix w = uniform_matrix(6, sf.order(), rng);
        std::vector<double> means;
        for (double ratio : {0.2, 0.1, 0.02}) {
            const auto layer = mollified_functional_weights(w, sf.cover(), ratio * gamma, grid);
            double sum = 0.0;
            for (const auto& f : fs) {
                const auto direct = matvec(w, sf.delta(f));
                const auto molly = apply_functional(layer, f);
                double e = 0.0;
                for (std::size_t j = 0; j < direct.size(); ++j) e = std::max(e, std::abs(direct[j] - molly[j]));
                sum += e;
            }
            means.push_back(sum / static_cast<double>(fs.size()));
        }
        const bool ok = means[1] <= means[0] && means[2] <= means[1] && means[2] < 1e-2;
        return Verdict{ok, fmt("mean gaps %.3g -> ", means[0]) + fmt("%.3g -> %.3g", means[1], means[2])};
    });

    criterion(8, "interpolation basis exactness", 5.0, [] {
        const SampleFactorization sf(unit, 0.02, Interp::multilinear, 101);
        std::mt19937_64 rng(8);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Matrix v = uniform_matrix(sf.order(), 8, rng);
            const auto b = uniform_vector(sf.order(), rng);
            const auto y = uniform_vector(8, rng);
            worst = std::max(worst, sup_distance(apply_basis(basis_from_interpolation(sf, v, b), y),
                                                 sf.delta_star(matvec(v, y, b))));
        }
        return Verdict{worst <= 1e-12, fmt("max node gap %.3g", worst)};
    });

    criterion(9, "trapezoid convergence order", 1.0, [] {
        const double exact = 1.0 - std::cos(1.0);
        std::vector<double> errs;
        for (std::size_t n : {11u, 21u, 41u, 81u}) {
            const auto g = make_grid(unit, n);
            const auto s = sample(g, [](std::span<const double> t) { return std::sin(t[0]); });
            errs.push_back(std::abs(quad_integral(s, SampledFunction(g, std::vector<double>(n, 1.0))) - exact));
        }
        bool ok = true;
        std::string detail = "ratios";
        for (std::size_t i = 1; i < errs.size(); ++i) {
            const double ratio = errs[i - 1] / errs[i];
            ok = ok && ratio >= 3.5 && ratio <= 4.5;
            detail += fmt(" %.4f", ratio);
        }
        return Verdict{ok, detail};
    });

    criterion(10, "architecture equivalence", 10.0, [] {
        const double gamma = 0.1;
        const SampleFactorization sfx(unit, gamma, Interp::multilinear, 11);
        const SampleFactorization sfy(unit, 0.05, Interp::multilinear, 101);
        const auto input_grid = make_grid(unit, 2001);
        const auto fs = lipschitz_functions(input_grid, 10, 10);
        const std::size_t m = sfx.order();
        // Identity inner layers: N = M, W1 = I, zero biases; the outer layer is random.
        std::mt19937_64 rng(10);
        TwoLayerNet net{Matrix::identity(m), std::vector<double>(m, 0.0), uniform_matrix(sfy.order(), m, rng),
                        uniform_vector(sfy.order(), rng), Activation::tanh};
        const auto t1 = assemble(Architecture::thm1, net, sfx, sfy, 0.02 * gamma, input_grid);
        const auto t2 = assemble(Architecture::thm2, net, sfx, sfy, 0.02 * gamma, input_grid);
        double gap12 = 0.0;
        for (const auto& f : fs) gap12 = std::max(gap12, sup_distance(net_apply(t1, f), net_apply(t2, f)));

        const auto finite = net_new(3, 9, sfy.order(), Activation::tanh, 10);
        const auto t3 = assemble(Architecture::thm3, finite, sfx, sfy, 0.02 * gamma, input_grid);
        double gap3 = 0.0;
        for (int t = 0; t < 10; ++t) {
            const auto x = uniform_vector(3, rng);
            gap3 = std::max(gap3, sup_distance(net_apply(t3, x), sfy.delta_star(forward(finite, x))));
        }
        return Verdict{gap12 <= 1e-10 && gap3 <= 1e-12, fmt("thm1-thm2 %.3g, thm3 %.3g", gap12, gap3)};
    });

    criterion(11, "determinism of the pipeline", 600.0, [] {
        if (pipeline_reports.size() != 5) return Verdict{false, "criterion 6 produced no reports"};
        int identical = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            identical += report_to_json(run_experiment(pipeline_config(seed)).report).dump(2) == pipeline_reports[seed];
        return Verdict{identical == 5, fmt("%g of 5 reports byte-identical", identical)};
    });

    std::printf("%s: %d failure(s)\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", failures);
    return failures == 0 ? 0 : 1;
}
