#include "tailsum/copulas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tailsum/error.hpp"

namespace tailsum {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_unit(double u, double v, const char* where) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        fail(ErrorCode::domain, std::string(where) + ": arguments must lie in [0, 1]");
}

bool is_product(const PickandsEV& p) {
    return p.family == Family::independence || (p.family == Family::gumbel && p.phi_g == 1.0);
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::independence: return "independence";
        case Family::gumbel: return "gumbel";
        case Family::comonotone: return "comonotone";
        case Family::barnett: return "barnett";
        case Family::custom: return "custom";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    if (name == "independence") return Family::independence;
    if (name == "gumbel") return Family::gumbel;
    if (name == "comonotone") return Family::comonotone;
    if (name == "barnett") return Family::barnett;
    fail(ErrorCode::config, "unknown copula family '" + name + "'");
}

double SurvivalCopula::log_value(double log_u, double log_v) const {
    if (log_chat) return log_chat(log_u, log_v);
    return safe_log(chat(std::exp(log_u), std::exp(log_v)));
}

double SurvivalCopula::log_partial_v(double log_u, double log_v) const {
    if (log_chat_v) return log_chat_v(log_u, log_v);
    return safe_log(chat_v(std::exp(log_u), std::exp(log_v)));
}

SurvivalCopula survival_from_copula(BivariateFn c, BivariateFn c_partial_v) {
    require(static_cast<bool>(c), ErrorCode::domain, "survival_from_copula: empty copula");
    constexpr double tol = 1e-12;
    constexpr int n = 10;
    std::array<double, n + 1> g{};
    for (int i = 0; i <= n; ++i) g[i] = static_cast<double>(i) / n;
    for (double w : g) {
        if (std::abs(c(w, 0.0)) > tol || std::abs(c(0.0, w)) > tol ||
            std::abs(c(w, 1.0) - w) > tol || std::abs(c(1.0, w) - w) > tol)
            fail(ErrorCode::domain, "survival_from_copula: margin axiom violated");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double vol = c(g[i + 1], g[j + 1]) - c(g[i], g[j + 1]) -
                               c(g[i + 1], g[j]) + c(g[i], g[j]);
            if (vol < -tol) fail(ErrorCode::domain, "survival_from_copula: not 2-increasing");
        }
    }

    SurvivalCopula sc;
    sc.chat = [c](double u, double v) {
        require_unit(u, v, "chat");
        return std::clamp(u + v - 1.0 + c(1.0 - u, 1.0 - v), 0.0, 1.0);
    };
    if (c_partial_v) {
        sc.chat_v = [c_partial_v](double u, double v) {
            require_unit(u, v, "chat_v");
            return std::clamp(1.0 - c_partial_v(1.0 - u, 1.0 - v), 0.0, 1.0);
        };
    } else {
        sc.chat_v_numeric = true;
        auto chat = sc.chat;
        sc.chat_v = [chat](double u, double v) {
            require_unit(u, v, "chat_v");
            const double h = 1e-6 * std::max(1.0, std::abs(v));
            auto diff = [&](double step) {
                if (v - step >= 0.0 && v + step <= 1.0)
                    return (chat(u, v + step) - chat(u, v - step)) / (2.0 * step);
                if (v - step < 0.0) return (chat(u, v + step) - chat(u, v)) / step;
                return (chat(u, v) - chat(u, v - step)) / step;
            };
            const bool central = v - h >= 0.0 && v + h <= 1.0;
            const double coarse = diff(h);
            const double fine = diff(h / 2.0);
            const double d = central ? (4.0 * fine - coarse) / 3.0 : 2.0 * fine - coarse;
            return std::clamp(d, 0.0, 1.0);
        };
    }
    return sc;
}

double PickandsEV::a1_11() const { return a1(1.0, 1.0); }

double PickandsEV::a2_10() const {
    if (a2_at_1_0_exact) return *a2_at_1_0_exact;
    return a2_limit_at_zero(a2);
}

double a2_limit_at_zero(const BivariateFn& a2) {
    double last = 0.0;
    for (double v = 1e-4; v >= 1e-10 * 0.999; v /= 10.0) last = a2(1.0, v);
    return last < 1e-8 ? 0.0 : last;
}

PickandsEV gumbel_pickands(double phi_g) {
    require(std::isfinite(phi_g) && phi_g >= 1.0, ErrorCode::domain,
            "gumbel: phi_g must be >= 1");
    PickandsEV p;
    p.family = Family::gumbel;
    p.phi_g = phi_g;
    if (phi_g == 1.0) {
        p.a_fn = [](double x, double y) { return x + y; };
        p.a1 = [](double, double) { return 1.0; };
        p.a2 = [](double, double) { return 1.0; };
        p.log_a2 = [](double, double) { return 0.0; };
        p.a2_at_1_0_exact = 1.0;
        return p;
    }
    // (x^φ + y^φ)^{1/φ} = M (1 + (m/M)^φ)^{1/φ} avoids overflow for large arguments.
    auto a = [phi_g](double x, double y) {
        const double hi = std::max(x, y);
        const double lo = std::min(x, y);
        if (hi == 0.0 || std::isinf(hi)) return hi;
        return hi * std::exp(std::log1p(std::pow(lo / hi, phi_g)) / phi_g);
    };
    p.a_fn = a;
    p.a1 = [a, phi_g](double x, double y) {
        const double s = a(x, y);
        return s == 0.0 ? 0.0 : std::pow(x / s, phi_g - 1.0);
    };
    p.a2 = [a, phi_g](double x, double y) {
        const double s = a(x, y);
        return s == 0.0 ? 0.0 : std::pow(y / s, phi_g - 1.0);
    };
    p.log_a2 = [a, phi_g](double x, double y) {
        if (y == 0.0) return kNegInf;
        return (phi_g - 1.0) * (std::log(y) - std::log(a(x, y)));
    };
    p.a2_at_1_0_exact = 0.0;
    return p;
}

PickandsEV independence_pickands() {
    PickandsEV p = gumbel_pickands(1.0);
    p.family = Family::independence;
    return p;
}

PickandsEV comonotone_pickands() {
    PickandsEV p;
    p.family = Family::comonotone;
    p.phi_g = std::numeric_limits<double>::infinity();
    p.a_fn = [](double x, double y) { return std::max(x, y); };
    p.a1 = [](double x, double y) { return x > y ? 1.0 : (x == y ? 0.5 : 0.0); };
    p.a2 = [](double x, double y) { return y > x ? 1.0 : (x == y ? 0.5 : 0.0); };
    p.log_a2 = [](double x, double y) {
        return y > x ? 0.0 : (x == y ? std::log(0.5) : kNegInf);
    };
    p.a2_at_1_0_exact = 0.0;
    return p;
}

double ev_chat(const PickandsEV& p, double u, double v) {
    require_unit(u, v, "ev_chat");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (is_product(p)) return u * v;
    if (p.family == Family::comonotone) return std::min(u, v);
    return std::exp(-p.a_fn(-std::log(u), -std::log(v)));
}

double ev_chat_v(const PickandsEV& p, double u, double v) {
    require_unit(u, v, "ev_chat_v");
    require(v > 0.0, ErrorCode::domain, "ev_chat_v: v must be positive");
    if (u == 0.0) return 0.0;
    if (is_product(p)) return u;
    if (p.family == Family::comonotone) return v < u ? 1.0 : (v == u ? 0.5 : 0.0);
    const double x = -std::log(u);
    const double y = -std::log(v);
    return std::clamp(std::exp(-p.a_fn(x, y)) * p.a2(x, y) / v, 0.0, 1.0);
}

SurvivalCopula survival_copula(const PickandsEV& p) {
    SurvivalCopula sc;
    sc.chat = [p](double u, double v) { return ev_chat(p, u, v); };
    sc.chat_v = [p](double u, double v) { return ev_chat_v(p, u, v); };
    if (is_product(p)) {
        sc.log_chat = [](double lu, double lv) { return lu + lv; };
        sc.log_chat_v = [](double lu, double) { return lu; };
        return sc;
    }
    if (p.family == Family::comonotone) {
        sc.log_chat = [](double lu, double lv) { return std::min(lu, lv); };
        sc.log_chat_v = [](double lu, double lv) {
            return lv < lu ? 0.0 : (lv == lu ? std::log(0.5) : kNegInf);
        };
        return sc;
    }
    sc.log_chat = [p](double lu, double lv) { return -p.a_fn(-lu, -lv); };
    // Ĉ_v = Ĉ · A₂(x, y) / v with x = -log u, y = -log v.
    sc.log_chat_v = [p](double lu, double lv) {
        const double x = -lu;
        const double y = -lv;
        return -p.a_fn(x, y) + p.log_a2(x, y) + y;
    };
    return sc;
}

SurvivalCopula survival_copula(const CopulaDescriptor& d) {
    switch (d.family) {
        case Family::independence:
        case Family::gumbel:
        case Family::comonotone:
            return survival_copula(pickands_for(d));
        case Family::barnett: {
            const double s = d.sigma;
            require(std::isfinite(s) && s >= 0.0 && s <= 1.0, ErrorCode::domain,
                    "barnett: sigma must lie in [0, 1]");
            SurvivalCopula sc;
            sc.log_chat = [s](double lu, double lv) { return lu + lv - s * lu * lv; };
            // Ĉ_v = u (1 - σ ln u) v^{-σ ln u}
            sc.log_chat_v = [s](double lu, double lv) {
                if (lu == 0.0) return 0.0;
                return lu + std::log1p(-s * lu) - s * lu * lv;
            };
            sc.chat = [s](double u, double v) {
                require_unit(u, v, "barnett chat");
                if (u == 0.0 || v == 0.0) return 0.0;
                const double lu = std::log(u);
                const double lv = std::log(v);
                return std::exp(lu + lv - s * lu * lv);
            };
            sc.chat_v = [s](double u, double v) {
                require_unit(u, v, "barnett chat_v");
                if (u == 0.0) return 0.0;
                const double lu = std::log(u);
                if (v == 0.0) return lu == 0.0 ? 1.0 : 0.0;
                return std::exp(lu + std::log1p(-s * lu) - s * lu * std::log(v));
            };
            return sc;
        }
        case Family::custom: break;
    }
    fail(ErrorCode::unsupported, "survival_copula: no closed form for family '" +
                                     to_string(d.family) + "'");
}

PickandsEV pickands_for(const CopulaDescriptor& d) {
    switch (d.family) {
        case Family::independence: return independence_pickands();
        case Family::gumbel: return gumbel_pickands(d.phi);
        case Family::comonotone: return comonotone_pickands();
        default: break;
    }
    fail(ErrorCode::unsupported,
         "family '" + to_string(d.family) + "' is not an extreme-value copula");
}

TailOrderTraits tail_order_traits(const PickandsEV& p) {
    TailOrderTraits t;
    t.family = p.family;
    t.ell = [](double) { return 1.0; };
    if (p.family == Family::comonotone) {
        t.kappa = 1.0;
        t.a1_11 = 0.5;
        t.tau = [](double u, double v) { return std::min(u, v); };
        t.tau_v = [](double u, double v) { return v < u ? 1.0 : (v == u ? 0.5 : 0.0); };
        return t;
    }
    const double a = p.a1_11();
    t.kappa = p.a_11();
    t.a1_11 = a;
    t.tau = [a](double u, double v) {
        if (u == 0.0 || v == 0.0) return 0.0;
        return std::pow(u * v, a);
    };
    t.tau_v = [a](double u, double v) {
        if (u == 0.0) return 0.0;
        return a * std::pow(u, a) * std::pow(v, a - 1.0);
    };
    return t;
}

TailOrderTraits tail_order_traits(const CopulaDescriptor& d) {
    return tail_order_traits(pickands_for(d));
}

PartialLimitTraits partial_limit_traits(const PickandsEV& p) {
    PartialLimitTraits t;
    t.theta_exp = 1.0;
    t.h = [](double) { return 1.0; };
    const double c = p.a2_10();
    t.a2_10 = c;
    t.beta = 1.0 - c;
    if (c == 0.0) {
        t.degenerate = true;
        t.varphi = [](double, double) { return 0.0; };
        return t;
    }
    if (c == 1.0) {
        t.varphi = [](double u, double) { return u; };
        return t;
    }
    t.varphi = [c](double u, double v) { return c * u * std::pow(v, c - 1.0); };
    return t;
}

PartialLimitTraits partial_limit_traits(const CopulaDescriptor& d) {
    return partial_limit_traits(pickands_for(d));
}

}  // namespace tailsum
