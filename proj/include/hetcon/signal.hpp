#pragma once

#include <variant>
#include <vector>

namespace hetcon {

struct Step {
    double amplitude = 1.0;
    double start = 0.0;
};

/// amplitude on [start, stop), zero elsewhere.
struct Pulse {
    double amplitude = 1.0;
    double start = 0.0;
    double stop = 1.0;
};

/// amplitude * exp(-decay t) * sin(frequency t + phase), frequency in rad/s.
struct Sine {
    double amplitude = 1.0;
    double frequency = 1.0;
    double phase = 0.0;
    double decay = 0.0;
};

/// amplitude * exp(-rate t).
struct ExpDecay {
    double amplitude = 1.0;
    double rate = 1.0;
};

using SignalPrimitive = std::variant<Step, Pulse, Sine, ExpDecay>;
using SignalSpec = std::vector<SignalPrimitive>;

/// Sum of primitives, defined for t >= 0.
class Signal {
public:
    Signal() = default;

    /// Right-continuous value: a step or pulse edge at t already applies at t.
    double operator()(double t) const;
    /// Limit from the left; differs from operator() only at step/pulse edges.
    double left_limit(double t) const;

    /// True when every primitive has finite L2 energy on [0, inf).
    bool is_finite_energy() const;

    /// Copy with step/pulse edges moved to the nearest multiple of dt.
    Signal snapped(double dt) const;

    const SignalSpec& spec() const { return spec_; }

private:
    friend Signal make_signal(SignalSpec spec);
    explicit Signal(SignalSpec spec) : spec_(std::move(spec)) {}
    double eval(double t, bool left) const;
    SignalSpec spec_;
};

/// Throws ValidationError on negative decay rates, stop < start or
/// non-finite parameters.
Signal make_signal(SignalSpec spec);

}  // namespace hetcon
