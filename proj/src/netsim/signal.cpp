#include "hetcon/signal.hpp"

#include <cmath>

#include "hetcon/errors.hpp"

namespace hetcon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

}  // namespace

Signal make_signal(SignalSpec spec) {
    for (const SignalPrimitive& prim : spec) {
        std::visit(overloaded{
                       [](const Step& s) {
                           if (!all_finite({s.amplitude, s.start}) || s.start < 0.0) {
                               throw ValidationError("step: parameters must be finite with start >= 0");
                           }
                       },
                       [](const Pulse& s) {
                           if (!all_finite({s.amplitude, s.start, s.stop}) || s.start < 0.0 || s.stop < s.start) {
                               throw ValidationError("pulse: need finite 0 <= start <= stop");
                           }
                       },
                       [](const Sine& s) {
                           if (!all_finite({s.amplitude, s.frequency, s.phase, s.decay})) {
                               throw ValidationError("sine: parameters must be finite");
                           }
                           if (s.decay < 0.0) {
                               throw ValidationError("sine: decay rate must be nonnegative");
                           }
                       },
                       [](const ExpDecay& s) {
                           if (!all_finite({s.amplitude, s.rate})) {
                               throw ValidationError("exp_decay: parameters must be finite");
                           }
                           if (s.rate < 0.0) {
                               throw ValidationError("exp_decay: rate must be nonnegative");
                           }
                       },
                   },
                   prim);
    }
    return Signal(std::move(spec));
}

double Signal::eval(double t, bool left) const {
    double acc = 0.0;
    for (const SignalPrimitive& prim : spec_) {
        acc += std::visit(overloaded{
                              [&](const Step& s) { return (left ? t > s.start : t >= s.start) ? s.amplitude : 0.0; },
                              [&](const Pulse& s) {
                                  const bool on = left ? (t > s.start && t <= s.stop) : (t >= s.start && t < s.stop);
                                  return on ? s.amplitude : 0.0;
                              },
                              [&](const Sine& s) {
                                  return s.amplitude * std::exp(-s.decay * t) * std::sin(s.frequency * t + s.phase);
                              },
                              [&](const ExpDecay& s) { return s.amplitude * std::exp(-s.rate * t); },
                          },
                          prim);
    }
    return acc;
}

double Signal::operator()(double t) const { return eval(t, false); }

double Signal::left_limit(double t) const { return eval(t, true); }

bool Signal::is_finite_energy() const {
    for (const SignalPrimitive& prim : spec_) {
        const bool finite = std::visit(overloaded{
                                           [](const Step& s) { return s.amplitude == 0.0; },
                                           [](const Pulse&) { return true; },
                                           [](const Sine& s) { return s.amplitude == 0.0 || s.decay > 0.0; },
                                           [](const ExpDecay& s) { return s.amplitude == 0.0 || s.rate > 0.0; },
                                       },
                                       prim);
        if (!finite) {
            return false;
        }
    }
    return true;
}

Signal Signal::snapped(double dt) const {
    auto snap = [dt](double t) { return std::round(t / dt) * dt; };
    SignalSpec out = spec_;
    for (SignalPrimitive& prim : out) {
        if (auto* s = std::get_if<Step>(&prim)) {
            s->start = snap(s->start);
        } else if (auto* p = std::get_if<Pulse>(&prim)) {
            p->start = snap(p->start);
            p->stop = snap(p->stop);
        }
    }
    return Signal(std::move(out));
}

}  // namespace hetcon
