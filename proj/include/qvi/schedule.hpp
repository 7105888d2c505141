#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qvi {

// Per-iteration parameter sequence f(k) = (p*k + q) / (r*k + s). Covers the
// shapes the algorithms use: constants (p=0, r=0), k/(5(k+1)), 1/(k+1),
// 3k/(7k+9). The denominator must stay positive for every k >= 0.
struct Schedule {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double s = 1.0;

    static Schedule constant(double v) { return make(0.0, v, 0.0, 1.0); }

    static Schedule make(double p_, double q_, double r_, double s_) {
        if (!(s_ > 0.0) || r_ < 0.0)
            throw std::invalid_argument("Schedule: need r >= 0 and s > 0 so the denominator "
                                        "is positive for every k >= 0");
        Schedule f;
        f.p = p_;
        f.q = q_;
        f.r = r_;
        f.s = s_;
        return f;
    }

    double operator()(long long k) const {
        const double kk = static_cast<double>(k);
        return (p * kk + q) / (r * kk + s);
    }

    bool is_constant() const { return p == 0.0 && r == 0.0; }

    std::string describe() const {
        std::ostringstream os;
        if (is_constant()) {
            os << q / s;
            return os.str();
        }
        os << "(" << p << "k+" << q << ")/(" << r << "k+" << s << ")";
        return os.str();
    }
};

}  // namespace qvi
