#include "saddlenode/signals.hpp"
#include "saddlenode/pspace.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace saddlenode {
namespace detail {

class SignalNode {
public:
    virtual ~SignalNode() = default;
    virtual double eval(double t) const = 0;
    virtual SignalInfo info() const = 0;
};

namespace {

class ConstantNode final : public SignalNode {
public:
    explicit ConstantNode(double v) : value_(v) {}
    double eval(double) const override { return value_; }
    SignalInfo info() const override { return {"constant", {{"value", value_}}, {}}; }

private:
    double value_;
};

class HarmonicNode final : public SignalNode {
public:
    HarmonicNode(double a, double w, double phi, Waveform kind)
        : amp_(a), omega_(w), phase_(phi), kind_(kind) {}
    double eval(double t) const override {
        const double arg = omega_ * t + phase_;
        return amp_ * (kind_ == Waveform::sine ? std::sin(arg) : std::cos(arg));
    }
    SignalInfo info() const override {
        return {kind_ == Waveform::sine ? "sin" : "cos",
                {{"amplitude", amp_}, {"omega", omega_}, {"phase", phase_}},
                {}};
    }

private:
    double amp_, omega_, phase_;
    Waveform kind_;
};

class SumNode final : public SignalNode {
public:
    SumNode(TimeSignal a, TimeSignal b) : a_(std::move(a)), b_(std::move(b)) {}
    double eval(double t) const override { return a_(t) + b_(t); }
    SignalInfo info() const override { return {"sum", {}, {a_, b_}}; }

private:
    TimeSignal a_, b_;
};

class ProductNode final : public SignalNode {
public:
    ProductNode(TimeSignal a, TimeSignal b) : a_(std::move(a)), b_(std::move(b)) {}
    double eval(double t) const override { return a_(t) * b_(t); }
    SignalInfo info() const override { return {"product", {}, {a_, b_}}; }

private:
    TimeSignal a_, b_;
};

class ScaleAddNode final : public SignalNode {
public:
    ScaleAddNode(TimeSignal s, double scale, double offset)
        : s_(std::move(s)), scale_(scale), offset_(offset) {}
    double eval(double t) const override { return scale_ * s_(t) + offset_; }
    SignalInfo info() const override {
        return {"scale_add", {{"scale", scale_}, {"offset", offset_}}, {s_}};
    }

private:
    TimeSignal s_;
    double scale_, offset_;
};

// Cubic edge piece of the spline bump on [1, 1.2], forced by the C^1
// conditions c(1)=1, c'(1)=0, c(1.2)=0, c'(1.2)=0. Coefficients are solved
// once from the 4x4 linear system.
struct BumpEdge {
    double c0, c1, c2, c3;
    double operator()(double u) const { return c0 + u * (c1 + u * (c2 + u * c3)); }
};

const BumpEdge& bump_edge() {
    static const BumpEdge edge = [] {
        Eigen::Matrix4d A;
        Eigen::Vector4d rhs;
        const double l = 1.0, r = 1.2;
        A << 1, l, l * l, l * l * l,
             0, 1, 2 * l, 3 * l * l,
             1, r, r * r, r * r * r,
             0, 1, 2 * r, 3 * r * r;
        rhs << 1, 0, 0, 0;
        Eigen::Vector4d c = A.fullPivLu().solve(rhs);
        return BumpEdge{c[0], c[1], c[2], c[3]};
    }();
    return edge;
}

double spline_bump_eval(double t) {
    const double a = std::abs(t);
    if (a <= 1.0) return 1.0;
    if (a >= 1.2) return 0.0;
    return bump_edge()(a);
}

class SplineBumpNode final : public SignalNode {
public:
    double eval(double t) const override { return spline_bump_eval(t); }
    SignalInfo info() const override { return {"spline_bump", {}, {}}; }
};

class BumpTrainNode final : public SignalNode {
public:
    explicit BumpTrainNode(int first) : first_(first) {
        if (first < 1) throw std::invalid_argument("bump_train: first_index must be >= 1");
    }
    double eval(double t) const override {
        // only offsets n^2 in [t-1.2, t+1.2] can contribute
        if (t < first_ * (double)first_ - 1.2) return 0.0;
        const long n_lo = std::max<long>(first_, (long)std::ceil(std::sqrt(std::max(0.0, t - 1.2))));
        const long n_hi = (long)std::floor(std::sqrt(std::max(0.0, t + 1.2)));
        double v = 0.0;
        for (long n = n_lo; n <= n_hi; ++n) v += spline_bump_eval(t - (double)n * (double)n);
        return v;
    }
    SignalInfo info() const override { return {"bump_train", {{"first", (double)first_}}, {}}; }

private:
    int first_;
};

class PlateauHatNode final : public SignalNode {
public:
    explicit PlateauHatNode(double k) : k_(k) {
        if (k < 0) throw std::invalid_argument("plateau_hat: k must be >= 0");
    }
    double eval(double t) const override {
        const double c = 1.0 - 0.5 * k_;
        return std::max(-1.0, std::max(std::min(1.0, c - t), std::min(1.0, c + t)));
    }
    SignalInfo info() const override { return {"plateau_hat", {{"k", k_}}, {}}; }

private:
    double k_;
};

class ArctanBlendNode final : public SignalNode {
public:
    ArctanBlendNode(TimeSignal base, double target, double steepness)
        : base_(std::move(base)), target_(target), k_(steepness) {
        if (!(steepness > 0)) throw std::invalid_argument("arctan_blend: steepness must be > 0");
    }
    double eval(double t) const override {
        const double w = 0.5 - std::atan(k_ * t - 1.0 / k_) / std::numbers::pi;
        return (base_(t) - target_) * w + target_;
    }
    SignalInfo info() const override {
        return {"arctan_blend", {{"target", target_}, {"steepness", k_}}, {base_}};
    }

private:
    TimeSignal base_;
    double target_, k_;
};

class ShiftNode final : public SignalNode {
public:
    ShiftNode(TimeSignal s, double by) : s_(std::move(s)), by_(by) {}
    double eval(double t) const override { return s_(t + by_); }
    SignalInfo info() const override { return {"shift", {{"by", by_}}, {s_}}; }
    const TimeSignal& inner() const { return s_; }
    double by() const { return by_; }

private:
    TimeSignal s_;
    double by_;
};

class GaussianFactorNode final : public SignalNode {
public:
    GaussianFactorNode(double a, double c) : a_(a), c_(c) {}
    double eval(double t) const override { return 1.0 + a_ * std::exp(-c_ * t * t); }
    SignalInfo info() const override { return {"gaussian_factor", {{"a", a_}, {"c", c_}}, {}}; }

private:
    double a_, c_;
};

// Dense-orbit schedule. Blocks b = 1, 2, ... of b intervals, each of length
// 2b, with a gap of width gap = 2*k1/k2 after every interval; block 1 is
// I0 = [0,2]. Block b starts at
//   (b-1)b(2b-1)/3 + gap*(b-1)b/2 .
double block_start(long b, double gap) {
    const double m = (double)(b - 1) * (double)b;
    return m * (double)(2 * b - 1) / 3.0 + gap * m / 2.0;
}

class DenseOrbitNode final : public SignalNode {
public:
    DenseOrbitNode(std::vector<TimeSignal> seeds, PSpaceParams params)
        : seeds_(std::move(seeds)), params_(params), gap_(2.0 * params.k1 / params.k2) {
        if (seeds_.empty()) throw std::invalid_argument("dense_orbit: seed list is empty");
        if (!(params.k1 > 0) || !(params.k2 > 0))
            throw std::invalid_argument("dense_orbit: k1, k2 must be > 0");
    }

    double eval(double t) const override {
        t = std::abs(t);  // even extension
        long b = 1;
        while (block_start(b + 1, gap_) <= t) ++b;
        const double ofs = t - block_start(b, gap_);
        const double period = 2.0 * (double)b + gap_;
        long pos = (long)std::floor(ofs / period);
        if (pos > b - 1) pos = b - 1;
        const double local = ofs - (double)pos * period;
        const double len = 2.0 * (double)b;
        if (local <= len) return seed(b, pos)(local - (double)b);
        // gap: linear interpolation between the adjacent interval endpoints
        const double left = seed(b, pos)((double)b);
        double right;
        if (pos + 1 <= b - 1) {
            right = seed(b, pos + 1)(-(double)b);
        } else {
            right = seed(b + 1, 0)(-(double)(b + 1));
        }
        const double theta = (local - len) / gap_;
        return left + (right - left) * theta;
    }

    SignalInfo info() const override {
        SignalInfo i{"dense_orbit", {{"k1", params_.k1}, {"k2", params_.k2}}, {}};
        i.children = seeds_;
        return i;
    }

private:
    const TimeSignal& seed(long /*block*/, long pos) const {
        return seeds_[(std::size_t)(pos % (long)seeds_.size())];
    }

    std::vector<TimeSignal> seeds_;
    PSpaceParams params_;
    double gap_;
};

}  // namespace
}  // namespace detail

TimeSignal::TimeSignal() : node_(std::make_shared<detail::ConstantNode>(0.0)) {}
TimeSignal::TimeSignal(std::shared_ptr<const detail::SignalNode> node) : node_(std::move(node)) {
    if (!node_) throw std::invalid_argument("TimeSignal: null node");
}
double TimeSignal::operator()(double t) const { return node_->eval(t); }

TimeSignal constant(double value) { return TimeSignal(std::make_shared<detail::ConstantNode>(value)); }

TimeSignal harmonic(double amplitude, double angular_frequency, double phase, Waveform kind) {
    return TimeSignal(std::make_shared<detail::HarmonicNode>(amplitude, angular_frequency, phase, kind));
}

TimeSignal sum(TimeSignal a, TimeSignal b) {
    return TimeSignal(std::make_shared<detail::SumNode>(std::move(a), std::move(b)));
}

TimeSignal product(TimeSignal a, TimeSignal b) {
    return TimeSignal(std::make_shared<detail::ProductNode>(std::move(a), std::move(b)));
}

TimeSignal scale_add(TimeSignal s, double scale, double offset) {
    return TimeSignal(std::make_shared<detail::ScaleAddNode>(std::move(s), scale, offset));
}

TimeSignal spline_bump() { return TimeSignal(std::make_shared<detail::SplineBumpNode>()); }

TimeSignal bump_train(int first_index) {
    return TimeSignal(std::make_shared<detail::BumpTrainNode>(first_index));
}

TimeSignal plateau_hat(double k) { return TimeSignal(std::make_shared<detail::PlateauHatNode>(k)); }

TimeSignal arctan_blend(TimeSignal base, double target, double steepness) {
    return TimeSignal(std::make_shared<detail::ArctanBlendNode>(std::move(base), target, steepness));
}

TimeSignal shift(TimeSignal s, double by) {
    // collapse nested shifts so the flow property holds exactly
    if (auto* sh = dynamic_cast<const detail::ShiftNode*>(&s.node())) {
        by += sh->by();
        s = sh->inner();
    }
    if (by == 0.0) return s;
    return TimeSignal(std::make_shared<detail::ShiftNode>(std::move(s), by));
}

TimeSignal gaussian_factor(double a, double c) {
    return TimeSignal(std::make_shared<detail::GaussianFactorNode>(a, c));
}

TimeSignal dense_orbit(std::vector<TimeSignal> seeds, PSpaceParams params) {
    return TimeSignal(std::make_shared<detail::DenseOrbitNode>(std::move(seeds), params));
}

SignalInfo describe(const TimeSignal& s) { return s.node().info(); }

OrbitSlot dense_orbit_slot(const PSpaceParams& params, int seed_index, long block) {
    if (seed_index < 1 || seed_index > block)
        throw std::invalid_argument("dense_orbit_slot: need 1 <= seed_index <= block");
    const double gap = 2.0 * params.k1 / params.k2;
    OrbitSlot slot;
    slot.block = block;
    slot.position = seed_index - 1;
    slot.half_length = (double)block;
    slot.a = detail::block_start(block, gap) + (double)(seed_index - 1) * (2.0 * (double)block + gap);
    slot.b = slot.a + 2.0 * (double)block;
    slot.center = slot.a + slot.half_length;
    return slot;
}

}  // namespace saddlenode
