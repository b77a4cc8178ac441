#pragma once

// Dormand-Prince 5(4) explicit Runge-Kutta pair with local error control.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace curvflow::detail {

using State = std::vector<double>;
using Rhs = std::function<void(double, const State&, State&)>;

struct Dopri5Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h0 = 0.0;        // initial step, 0 picks one automatically
    double h_min = 1e-14;   // relative to max(1, |t|)
    double h_max = 0.0;     // 0 means unbounded
    long max_steps = 10000000;
};

class Dopri5 {
public:
    Dopri5(Rhs f, std::size_t n, Dopri5Options opt) : f_(std::move(f)), opt_(opt) {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_}) v->resize(n);
    }

    /// Attempts one step from (t, y) with step h. On success updates t, y and
    /// k1 (FSAL) and returns true; always updates h to the proposed next step.
    bool step(double& t, State& y, double& h) {
        const std::size_t n = y.size();
        if (!have_k1_) {
            f_(t, y, k1_);
            have_k1_ = true;
        }
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                                a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                                a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
        f_(t + h / 5.0, tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        f_(t + 3.0 * h / 10.0, tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        f_(t + 4.0 * h / 5.0, tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        f_(t + 8.0 * h / 9.0, tmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        f_(t + h, tmp_, k6_);
        for (std::size_t i = 0; i < n; ++i)
            ynew_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        f_(t + h, ynew_, k7_);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            err = std::max(err, std::abs(ei) / sc);
        }
        double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        if (err <= 1.0) {
            t += h;
            std::swap(y, ynew_);
            std::swap(k1_, k7_);
            h *= fac;
            if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
            return true;
        }
        h *= std::min(fac, 1.0);
        return false;
    }

    /// Derivative at the current accepted state.
    const State& derivative() const { return k1_; }

    double initial_step(double t, const State& y) {
        if (opt_.h0 > 0.0) return opt_.h0;
        f_(t, y, k1_);
        have_k1_ = true;
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1_[i]) / sc);
        }
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
        return h;
    }

    const Dopri5Options& options() const { return opt_; }

private:
    Rhs f_;
    Dopri5Options opt_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
    bool have_k1_ = false;
};

}  // namespace curvflow::detail
