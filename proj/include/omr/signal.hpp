// Core sampled-signal value types. Signals are immutable values after
// construction as far as the library is concerned; every operation returns
// a new signal.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace omr {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RealSignal {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    RealSignal() = default;
    RealSignal(std::vector<double> s, int rate) : samples(std::move(s)), sample_rate_hz(rate) {
        if (rate <= 0) throw ParameterError("RealSignal: sample rate must be positive");
    }

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

struct IqSignal {
    std::vector<cplx> samples;
    int sample_rate_hz = 0;

    IqSignal() = default;
    IqSignal(std::vector<cplx> s, int rate) : samples(std::move(s)), sample_rate_hz(rate) {
        if (rate <= 0) throw ParameterError("IqSignal: sample rate must be positive");
    }

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

// Mean square amplitude.
inline double power(const RealSignal& s) {
    if (s.samples.empty()) throw ParameterError("power: empty signal");
    double acc = 0.0;
    for (double v : s.samples) acc += v * v;
    return acc / static_cast<double>(s.samples.size());
}

inline double power(const IqSignal& s) {
    if (s.samples.empty()) throw ParameterError("power: empty signal");
    double acc = 0.0;
    for (const cplx& v : s.samples) acc += std::norm(v);
    return acc / static_cast<double>(s.samples.size());
}

inline double peak_abs(const RealSignal& s) {
    double m = 0.0;
    for (double v : s.samples) m = std::max(m, std::fabs(v));
    return m;
}

inline double db(double power_ratio) { return 10.0 * std::log10(power_ratio); }

}  // namespace omr
