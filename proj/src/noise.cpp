#include "dwsync/noise.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dwsync {

namespace {

// splitmix64 step: golden-gamma increment followed by the Stafford mix13
// finalizer. Chaining one step per key word gives full avalanche between words.
inline uint64_t sm64(uint64_t x) {
    uint64_t z = x + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// strictly inside (0,1): (h >> 11) * 2^-53 + 2^-54
inline double bits_to_open_unit(uint64_t h) {
    return double(h >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

uint64_t mix_words(uint64_t seed, uint64_t w0, uint64_t w1, uint64_t w2, uint64_t w3) {
    uint64_t h = sm64(seed ^ 0x243F6A8885A308D3ull);
    h = sm64(h ^ w0);
    h = sm64(h ^ w1);
    h = sm64(h ^ w2);
    h = sm64(h ^ w3);
    return h;
}

double hash_uniform(uint64_t seed, uint64_t tag, uint64_t item, uint64_t component) {
    return bits_to_open_unit(mix_words(seed, tag, item, component, 0x5C4F75ull));
}

double hash_normal(uint64_t seed, uint64_t tag, uint64_t item, uint64_t component) {
    return inverse_normal_cdf(hash_uniform(seed, tag, item, component));
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
    double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                           6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                         1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                       1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                           3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                         5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                       4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                           2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                         3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                       4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                           1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                         6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                       2.05319162663775882187e0) * r + 1.0);
        z = num / den;
    } else {
        r -= 5.0;
        double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                           1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                         2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                       5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                           1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                         1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                       5.99832206555887937690e-1) * r + 1.0);
        z = num / den;
    }
    return (q < 0.0) ? -z : z;
}

IncrementSource::IncrementSource(uint64_t master_seed, int n, double dt, uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), n_(n), dt_(dt) {
    if (n < 1) throw std::invalid_argument("IncrementSource: n must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("IncrementSource: dt must be > 0");
    sqrt_dt_ = std::sqrt(dt);
    dt_bits_ = std::bit_cast<uint64_t>(dt);
}

void IncrementSource::increment(int64_t k, double* out) const {
    auto cell = static_cast<uint64_t>(k + offset_);
    for (int c = 0; c < n_; ++c) {
        uint64_t h = mix_words(master_seed_, stream_id_, cell, static_cast<uint64_t>(c), dt_bits_);
        out[c] = inverse_normal_cdf(bits_to_open_unit(h)) * sqrt_dt_;
    }
}

std::vector<double> IncrementSource::increment(int64_t k) const {
    std::vector<double> out(n_);
    increment(k, out.data());
    return out;
}

IncrementSource IncrementSource::shift(int64_t s_cells) const {
    IncrementSource v = *this;
    v.offset_ += s_cells;
    return v;
}

}  // namespace dwsync
