#include "opfact/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "opfact/errors.hpp"
#include "opfact/random.hpp"

namespace opfact {

std::string_view to_string(Activation g) { return g == Activation::tanh ? "tanh" : "relu"; }

Activation activation_from_string(std::string_view name) {
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation g, double x) { return g == Activation::tanh ? std::tanh(x) : std::max(0.0, x); }

double activate_derivative(Activation g, double x) {
    if (g == Activation::tanh) {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    }
    return x > 0.0 ? 1.0 : 0.0;
}

std::size_t TwoLayerNet::parameter_count() const {
    return w1.data().size() + b1.size() + w2.data().size() + b2.size();
}

std::vector<double> TwoLayerNet::parameters() const {
    std::vector<double> p;
    p.reserve(parameter_count());
    p.insert(p.end(), w1.data().begin(), w1.data().end());
    p.insert(p.end(), b1.begin(), b1.end());
    p.insert(p.end(), w2.data().begin(), w2.data().end());
    p.insert(p.end(), b2.begin(), b2.end());
    return p;
}

void TwoLayerNet::set_parameters(std::span<const double> p) {
    if (p.size() != parameter_count()) throw ShapeError("set_parameters: wrong parameter count");
    auto it = p.begin();
    auto take = [&](std::span<double> dst) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
        it += static_cast<std::ptrdiff_t>(dst.size());
    };
    take(w1.data());
    take(b1);
    take(w2.data());
    take(b2);
}

TwoLayerNet net_new(std::size_t m1, std::size_t n, std::size_t m2, Activation g, std::uint64_t seed) {
    if (m1 == 0 || n == 0 || m2 == 0) throw std::invalid_argument("net_new: dimensions must be positive");
    TwoLayerNet net{Matrix(n, m1), std::vector<double>(n, 0.0), Matrix(m2, n), std::vector<double>(m2, 0.0), g};
    std::mt19937_64 rng(seed);
    auto fill = [&](Matrix& w) {
        const double a = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> dist(-a, a);
        for (double& x : w.data()) x = dist(rng);
    };
    fill(net.w1);
    fill(net.w2);
    return net;
}

std::vector<double> forward(const TwoLayerNet& net, std::span<const double> x) {
    if (x.size() != net.inputs()) throw ShapeError("forward: input length mismatch");
    auto hidden = matvec(net.w1, x, net.b1);
    for (double& h : hidden) h = activate(net.activation, h);
    return matvec(net.w2, hidden, net.b2);
}

LossGrad loss_grad(const TwoLayerNet& net, const Dataset& data) {
    if (data.inputs.size() != data.targets.size()) throw ShapeError("loss_grad: input/target count mismatch");
    if (data.inputs.empty()) throw std::invalid_argument("loss_grad: empty dataset");
    const std::size_t m1 = net.inputs(), n = net.hidden(), m2 = net.outputs();

    LossGrad out;
    out.gradient.assign(net.parameter_count(), 0.0);
    double* g_w1 = out.gradient.data();
    double* g_b1 = g_w1 + n * m1;
    double* g_w2 = g_b1 + n;
    double* g_b2 = g_w2 + m2 * n;

    const double scale = 1.0 / (static_cast<double>(data.size()) * static_cast<double>(m2));
    std::vector<double> pre(n), act(n), resid(m2), back(n);
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto& x = data.inputs[s];
        const auto& y = data.targets[s];
        if (x.size() != m1 || y.size() != m2) throw ShapeError("loss_grad: sample dimension mismatch");

        for (std::size_t i = 0; i < n; ++i) {
            double acc = net.b1[i];
            const auto row = net.w1.row(i);
            for (std::size_t j = 0; j < m1; ++j) acc += row[j] * x[j];
            pre[i] = acc;
            act[i] = activate(net.activation, acc);
        }
        for (std::size_t k = 0; k < m2; ++k) {
            double acc = net.b2[k];
            const auto row = net.w2.row(k);
            for (std::size_t i = 0; i < n; ++i) acc += row[i] * act[i];
            resid[k] = acc - y[k];
            out.loss += scale * resid[k] * resid[k];
        }

        // d loss / d output = 2 * scale * resid
        std::fill(back.begin(), back.end(), 0.0);
        for (std::size_t k = 0; k < m2; ++k) {
            const double go = 2.0 * scale * resid[k];
            g_b2[k] += go;
            const auto row = net.w2.row(k);
            for (std::size_t i = 0; i < n; ++i) {
                g_w2[k * n + i] += go * act[i];
                back[i] += go * row[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double gp = back[i] * activate_derivative(net.activation, pre[i]);
            g_b1[i] += gp;
            for (std::size_t j = 0; j < m1; ++j) g_w1[i * m1 + j] += gp * x[j];
        }
    }
    return out;
}

namespace {

struct RunResult {
    TwoLayerNet net;
    std::vector<double> history;
    bool diverged = false;
};

RunResult run_descent(TwoLayerNet net, const Dataset& data, const TrainConfig& config) {
    RunResult r{std::move(net), {}, false};
    r.history.reserve(config.epochs + 1);
    auto params = r.net.parameters();
    std::vector<double> velocity(params.size(), 0.0);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const LossGrad lg = loss_grad(r.net, data);
        r.history.push_back(lg.loss);
        if (!std::isfinite(lg.loss)) {
            r.diverged = true;
            return r;
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            velocity[i] = config.momentum * velocity[i] - config.step * lg.gradient[i];
            params[i] += velocity[i];
        }
        r.net.set_parameters(params);
    }
    const double final_loss = loss_grad(r.net, data).loss;
    r.history.push_back(final_loss);
    r.diverged = !std::isfinite(final_loss);
    return r;
}

}  // namespace

TrainResult train(const TwoLayerNet& net, const Dataset& data, const TrainConfig& config) {
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (!(config.step >= 0.0) || !(config.momentum >= 0.0 && config.momentum < 1.0) || config.restarts == 0)
        throw std::invalid_argument("train: invalid TrainConfig");

    std::vector<std::future<RunResult>> runs;
    std::vector<std::uint64_t> seeds(config.restarts);
    for (std::size_t r = 0; r < config.restarts; ++r) {
        seeds[r] = r == 0 ? config.seed : derive_seed(config.seed, r);
        TwoLayerNet start = r == 0 ? net
                                   : net_new(net.inputs(), net.hidden(), net.outputs(), net.activation, seeds[r]);
        runs.push_back(std::async(std::launch::async, run_descent, std::move(start), std::cref(data), config));
    }

    TrainResult result;
    std::vector<RunResult> done;
    done.reserve(runs.size());
    for (auto& f : runs) done.push_back(f.get());

    bool have_best = false;
    for (std::size_t r = 0; r < done.size(); ++r) {
        const double final_loss = done[r].history.back();
        result.restarts.push_back({seeds[r], final_loss, done[r].diverged});
        if (done[r].diverged) continue;
        if (!have_best || final_loss < done[result.best_restart].history.back()) {
            result.best_restart = r;
            have_best = true;
        }
    }
    result.all_diverged = !have_best;
    if (have_best) {
        result.net = std::move(done[result.best_restart].net);
        result.history = std::move(done[result.best_restart].history);
    } else {
        result.net = net;
        result.history = std::move(done.front().history);
    }
    return result;
}

double grad_check(const TwoLayerNet& net, std::span<const double> x, std::span<const double> y, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be positive");
    const Dataset data{{std::vector<double>(x.begin(), x.end())}, {std::vector<double>(y.begin(), y.end())}};
    const auto analytic = loss_grad(net, data).gradient;
    auto params = net.parameters();
    TwoLayerNet probe = net;
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        probe.set_parameters(params);
        const double up = loss_grad(probe, data).loss;
        params[i] = saved - h;
        probe.set_parameters(params);
        const double down = loss_grad(probe, data).loss;
        params[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        // Relative where the gradient is visible, absolute near zero (0/0 guard).
        const double scale = std::max(std::abs(analytic[i]), std::abs(numeric));
        const double diff = std::abs(analytic[i] - numeric);
        worst = std::max(worst, scale >= 1e-4 ? diff / scale : diff);
    }
    return worst;
}

}  // namespace opfact
