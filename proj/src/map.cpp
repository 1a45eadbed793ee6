#include "atlas/map.hpp"

#include <cmath>

#include "atlas/errors.hpp"
#include "atlas/expr.hpp"

namespace atlas {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

void check_finite(const LiftPoint& z, const char* where) {
    if (!z.finite()) throw NonFinite(std::string("non-finite point in ") + where);
}
}  // namespace

struct LiftedMap::Impl {
    double k = 0.0;           // standard
    double a = 0.0, b = 0.0;  // nontwist

    // user maps
    std::optional<Expr> fx, fy;
    std::map<std::string, double> user_params;

    MapFamily family = MapFamily::StandardMap;

    LiftPoint forward(const LiftPoint& z) const {
        switch (family) {
            case MapFamily::StandardMap: {
                double yn = z.y - (k / kTwoPi) * std::sin(kTwoPi * z.x);
                return {z.x + yn, yn};
            }
            case MapFamily::StandardNontwistMap: {
                double yn = z.y - b * std::sin(kTwoPi * z.x);
                return {z.x + a * (1.0 - yn * yn), yn};
            }
            case MapFamily::UserDefined:
                return {fx->eval(z.x, z.y, user_params), fy->eval(z.x, z.y, user_params)};
        }
        return z;
    }

    LiftPoint backward(const LiftPoint& z) const {
        switch (family) {
            case MapFamily::StandardMap: {
                double x = z.x - z.y;
                return {x, z.y + (k / kTwoPi) * std::sin(kTwoPi * x)};
            }
            case MapFamily::StandardNontwistMap: {
                double x = z.x - a * (1.0 - z.y * z.y);
                return {x, z.y + b * std::sin(kTwoPi * x)};
            }
            case MapFamily::UserDefined:
                return newton_backward(z);
        }
        return z;
    }

    // Damped Newton solve of forward(w) = z for user maps.
    LiftPoint newton_backward(const LiftPoint& z) const {
        LiftPoint w = z;
        for (int it = 0; it < 100; ++it) {
            LiftPoint r = forward(w) - z;
            double res = sup_norm(r);
            if (!std::isfinite(res)) throw NonFinite("user-map inverse diverged");
            if (res < 1e-13) return w;
            LiftPoint step = fd_jacobian(w).inverse() * r;
            double scale = 1.0;
            for (int h = 0; h < 30; ++h) {
                LiftPoint trial = w - step * scale;
                if (sup_norm(forward(trial) - z) < res) { w = trial; break; }
                scale *= 0.5;
                if (h == 29) w = w - step * scale;
            }
        }
        if (sup_norm(forward(w) - z) > 1e-10)
            throw NonFinite("user-map inverse did not converge");
        return w;
    }

    Mat2 fd_jacobian(const LiftPoint& z) const {
        const double h = 1e-6;
        LiftPoint fxp = forward({z.x + h, z.y}), fxm = forward({z.x - h, z.y});
        LiftPoint fyp = forward({z.x, z.y + h}), fym = forward({z.x, z.y - h});
        return {(fxp.x - fxm.x) / (2 * h), (fyp.x - fym.x) / (2 * h),
                (fxp.y - fxm.y) / (2 * h), (fyp.y - fym.y) / (2 * h)};
    }

    Mat2 forward_jacobian(const LiftPoint& z) const {
        switch (family) {
            case MapFamily::StandardMap: {
                double c = k * std::cos(kTwoPi * z.x);
                // y' = y - (k/2pi) sin(2pi x): d/dx = -c, d/dy = 1; x' = x + y'
                return {1.0 - c, 1.0, -c, 1.0};
            }
            case MapFamily::StandardNontwistMap: {
                double c = kTwoPi * b * std::cos(kTwoPi * z.x);
                double yn = z.y - b * std::sin(kTwoPi * z.x);
                return {1.0 + 2.0 * a * yn * c, -2.0 * a * yn, -c, 1.0};
            }
            case MapFamily::UserDefined:
                return fd_jacobian(z);
        }
        return Mat2::identity();
    }
};

LiftedMap::LiftedMap(std::unique_ptr<Impl> impl)
    : family_(impl->family), impl_(std::move(impl)) {}

LiftedMap LiftedMap::standard(double k) {
    auto impl = std::make_unique<Impl>();
    impl->family = MapFamily::StandardMap;
    impl->k = k;
    LiftedMap m(std::move(impl));
    m.params_ = {{"k", k}};
    return m;
}

LiftedMap LiftedMap::nontwist(double a, double b) {
    auto impl = std::make_unique<Impl>();
    impl->family = MapFamily::StandardNontwistMap;
    impl->a = a;
    impl->b = b;
    LiftedMap m(std::move(impl));
    m.params_ = {{"a", a}, {"b", b}};
    return m;
}

LiftedMap LiftedMap::user(const std::string& fx, const std::string& fy,
                          const std::map<std::string, double>& params) {
    auto impl = std::make_unique<Impl>();
    impl->family = MapFamily::UserDefined;
    impl->fx = Expr::parse(fx);
    impl->fy = Expr::parse(fy);
    impl->user_params = params;
    LiftedMap m(std::move(impl));
    m.params_ = params;
    return m;
}

LiftPoint LiftedMap::apply(const LiftPoint& z) const {
    check_finite(z, "apply");
    LiftPoint w = reversed_ ? impl_->backward(z) : impl_->forward(z);
    if (!w.finite()) throw NonFinite("map image is non-finite (bad parameters?)");
    return w;
}

LiftPoint LiftedMap::apply_inverse(const LiftPoint& z) const {
    check_finite(z, "apply_inverse");
    LiftPoint w = reversed_ ? impl_->forward(z) : impl_->backward(z);
    if (!w.finite()) throw NonFinite("inverse image is non-finite");
    return w;
}

Mat2 LiftedMap::jacobian(const LiftPoint& z) const {
    check_finite(z, "jacobian");
    if (!reversed_) return impl_->forward_jacobian(z);
    // D(f^-1)(z) = (Df)^-1 at the preimage
    return impl_->forward_jacobian(impl_->backward(z)).inverse();
}

Mat2 LiftedMap::jacobian_inverse(const LiftPoint& z) const {
    check_finite(z, "jacobian_inverse");
    if (reversed_) return impl_->forward_jacobian(z);
    return impl_->forward_jacobian(impl_->backward(z)).inverse();
}

LiftedMap LiftedMap::reversed() const {
    LiftedMap m(*this);
    m.reversed_ = !reversed_;
    return m;
}

LiftedMap::LiftedMap(const LiftedMap& o)
    : family_(o.family_), params_(o.params_), reversed_(o.reversed_),
      impl_(std::make_unique<Impl>()) {
    impl_->k = o.impl_->k;
    impl_->a = o.impl_->a;
    impl_->b = o.impl_->b;
    impl_->family = o.impl_->family;
    impl_->user_params = o.impl_->user_params;
    if (o.impl_->fx) impl_->fx = Expr::parse(o.impl_->fx->source());
    if (o.impl_->fy) impl_->fy = Expr::parse(o.impl_->fy->source());
}

LiftedMap& LiftedMap::operator=(const LiftedMap& o) {
    if (this != &o) *this = LiftedMap(o);
    return *this;
}

LiftedMap::LiftedMap(LiftedMap&&) noexcept = default;
LiftedMap& LiftedMap::operator=(LiftedMap&&) noexcept = default;
LiftedMap::~LiftedMap() = default;

std::string family_name(MapFamily f) {
    switch (f) {
        case MapFamily::StandardMap: return "standard";
        case MapFamily::StandardNontwistMap: return "nontwist";
        case MapFamily::UserDefined: return "user";
    }
    return "unknown";
}

MapFamily family_from_name(const std::string& name) {
    if (name == "standard") return MapFamily::StandardMap;
    if (name == "nontwist") return MapFamily::StandardNontwistMap;
    if (name == "user") return MapFamily::UserDefined;
    throw ParseError("unknown map family '" + name + "'");
}

}  // namespace atlas
