#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace flab {

enum class OdeStatus { Ok, StepSizeUnderflow, MaxStepsExceeded };

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h0 = 0;  // 0 selects an initial step automatically
    double h_max = 0;  // 0 means t_end - t0
    long max_steps = 2'000'000;
};

struct OdeStats {
    long accepted = 0, rejected = 0, rhs_evals = 0;
    bool stiffness_detected = false;
};

// Dormand-Prince 5(4), PI step control, Hermite dense output on accepted steps.
// Emits the state at each requested sample time (ascending, inside [t0, t_end]).
template <std::size_t N>
class Dopri5 {
public:
    using State = std::array<double, N>;

    struct Result {
        OdeStatus status = OdeStatus::Ok;
        std::vector<double> times;
        std::vector<State> states;
        double t_last = 0;
        State y_last{};
        OdeStats stats;
    };

    explicit Dopri5(OdeOptions o = {}) : opt_(o) {}

    template <class Rhs>
    Result integrate(Rhs&& f, double t0, const State& y0, double t_end, const std::vector<double>& samples) const {
        Result res;
        std::size_t next = 0;
        auto emit_until = [&](double t_hi, auto&& value_at) {
            while (next < samples.size() && samples[next] <= t_hi) {
                res.times.push_back(samples[next]);
                res.states.push_back(value_at(samples[next]));
                ++next;
            }
        };
        double t = t0;
        State y = y0, k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
        f(t, y, k1);
        res.stats.rhs_evals = 1;
        emit_until(t0, [&](double) { return y; });

        const double span = t_end - t0;
        const double hmax = opt_.h_max > 0 ? opt_.h_max : span;
        double h = opt_.h0 > 0 ? opt_.h0 : initial_step(f, t, y, k1, hmax, res.stats);
        double err_old = 1e-4;
        bool last_rejected = false;
        int stiff_hits = 0, nonstiff = 0;

        while (t < t_end) {
            if (res.stats.accepted + res.stats.rejected >= opt_.max_steps) {
                res.status = OdeStatus::MaxStepsExceeded;
                break;
            }
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                res.status = OdeStatus::StepSizeUnderflow;
                break;
            }
            bool last = false;
            if (t + 1.01 * h >= t_end) {
                h = t_end - t;
                last = true;
            }

            stage<1>(y, h, {a21}, {&k1}, ytmp); f(t + c2 * h, ytmp, k2);
            stage<2>(y, h, {a31, a32}, {&k1, &k2}, ytmp); f(t + c3 * h, ytmp, k3);
            stage<3>(y, h, {a41, a42, a43}, {&k1, &k2, &k3}, ytmp); f(t + c4 * h, ytmp, k4);
            stage<4>(y, h, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}, ytmp); f(t + c5 * h, ytmp, k5);
            State ysti;
            stage<5>(y, h, {a61, a62, a63, a64, a65}, {&k1, &k2, &k3, &k4, &k5}, ysti); f(t + h, ysti, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            f(t + h, ynew, k7);
            res.stats.rhs_evals += 6;

            double err = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);
            if (!std::isfinite(err)) err = 1e10;

            if (err <= 1.0) {
                // stiffness estimate h*|lambda| from the last two stages
                double num = 0, den = 0;
                for (std::size_t i = 0; i < N; ++i) {
                    num += (k7[i] - k6[i]) * (k7[i] - k6[i]);
                    den += (ynew[i] - ysti[i]) * (ynew[i] - ysti[i]);
                }
                if (den > 0 && h * h * num > 3.25 * 3.25 * den) {
                    nonstiff = 0;
                    if (++stiff_hits >= 15) res.stats.stiffness_detected = true;
                } else if (++nonstiff >= 6) {
                    stiff_hits = 0;
                }

                const double t_new = last ? t_end : t + h;
                emit_until(t_new, [&](double ts) { return hermite(t, h, y, ynew, k1, k7, ts); });
                t = t_new;
                y = ynew;
                k1 = k7;
                ++res.stats.accepted;

                double fac = std::pow(err, -0.7 / 5) * std::pow(err_old, 0.4 / 5);
                fac = std::clamp(0.9 * fac, 0.2, 10.0);
                if (last_rejected) fac = std::min(fac, 1.0);
                err_old = std::max(err, 1e-4);
                h = std::min(h * fac, hmax);
                last_rejected = false;
            } else {
                ++res.stats.rejected;
                h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
                last_rejected = true;
            }
        }
        res.t_last = t;
        res.y_last = y;
        return res;
    }

private:
    OdeOptions opt_;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    template <std::size_t M>
    static void stage(const State& y, double h, const std::array<double, M>& a,
                      const std::array<const State*, M>& k, State& out) {
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < M; ++j) s += a[j] * (*k[j])[i];
            out[i] = y[i] + h * s;
        }
    }

    static State hermite(double t0, double h, const State& y0, const State& y1, const State& f0,
                         const State& f1, double ts) {
        const double th = (ts - t0) / h, th2 = th * th, th3 = th2 * th;
        const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + th;
        const double h01 = -2 * th3 + 3 * th2, h11 = th3 - th2;
        State r;
        for (std::size_t i = 0; i < N; ++i)
            r[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        return r;
    }

    template <class Rhs>
    double initial_step(Rhs& f, double t, const State& y, const State& f0, double hmax, OdeStats& st) const {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt_.atol + opt_.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (f0[i] / sc) * (f0[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, hmax);
        State y1, f1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * f0[i];
        f(t + h0, y1, f1);
        ++st.rhs_evals;
        double d2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt_.atol + opt_.rtol * std::abs(y[i]);
            d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5);
        return std::min({100 * h0, h1, hmax});
    }
};

}  // namespace flab
