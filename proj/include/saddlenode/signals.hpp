#pragma once

#include <memory>
#include <string>
#include <vector>

namespace saddlenode {

namespace detail {
class SignalNode;
}

/// Immutable real-valued function of time, built as an expression tree.
/// Copies are cheap (shared tree); evaluation is re-entrant, so a signal
/// may be used from many threads at once.
class TimeSignal {
public:
    TimeSignal();  // identically zero
    explicit TimeSignal(std::shared_ptr<const detail::SignalNode> node);

    double operator()(double t) const;

    const detail::SignalNode& node() const { return *node_; }
    std::shared_ptr<const detail::SignalNode> node_ptr() const { return node_; }

private:
    std::shared_ptr<const detail::SignalNode> node_;
};

enum class Waveform { sine, cosine };

TimeSignal constant(double value);
TimeSignal harmonic(double amplitude, double angular_frequency, double phase, Waveform kind);
TimeSignal sum(TimeSignal a, TimeSignal b);
TimeSignal product(TimeSignal a, TimeSignal b);
TimeSignal scale_add(TimeSignal s, double scale, double offset);  // scale*s(t)+offset

inline TimeSignal operator+(TimeSignal a, TimeSignal b) { return sum(std::move(a), std::move(b)); }
inline TimeSignal operator*(TimeSignal a, TimeSignal b) { return product(std::move(a), std::move(b)); }
inline TimeSignal operator+(TimeSignal a, double c) { return scale_add(std::move(a), 1.0, c); }
inline TimeSignal operator+(double c, TimeSignal a) { return scale_add(std::move(a), 1.0, c); }
inline TimeSignal operator*(double c, TimeSignal a) { return scale_add(std::move(a), c, 0.0); }

/// The C^1 cubic spline that is 1 on [-1,1], 0 outside [-1.2,1.2].
TimeSignal spline_bump();

/// Sum of spline bumps centered at n^2 for n >= first_index. Bumps have
/// compact support, so for any t only the (at most one) covering bump is
/// summed and there is no truncation error.
TimeSignal bump_train(int first_index = 2);

/// max{-1, min{1, 1-k/2-t}, min{1, 1-k/2+t}}, the tent/plateau family p_k.
TimeSignal plateau_hat(double k);

/// (base(t)-target)*(1/2 - atan(steepness*t - 1/steepness)/pi) + target.
/// Blends from base in the far past to the constant target in the far future.
TimeSignal arctan_blend(TimeSignal base, double target, double steepness);

TimeSignal shift(TimeSignal s, double by);  // shift(s,by)(t) = s(t+by)

/// 1 + a*exp(-c*t^2)
TimeSignal gaussian_factor(double a, double c);

struct PSpaceParams {
    double k1 = 1.0;  // sup-norm bound
    double k2 = 1.0;  // Lipschitz bound
};

/// Function with dense shift-orbit in the space of k1-bounded, k2-Lipschitz
/// continuous functions. The seed list must be nonempty; blocks are realized
/// lazily as evaluation demands. See pspace.hpp for the schedule helpers.
TimeSignal dense_orbit(std::vector<TimeSignal> seeds, PSpaceParams params);

/// Structural description of the root node, for serialization.
struct SignalInfo {
    std::string kind;
    std::vector<std::pair<std::string, double>> params;
    std::vector<TimeSignal> children;
};
SignalInfo describe(const TimeSignal& s);

}  // namespace saddlenode
