#pragma once

#include <cstdint>
#include <vector>

namespace dwsync {

// Inverse of the standard normal CDF (Wichura's PPND16), accurate to ~1e-16
// relative over (0, 1). Fixed algorithm: increments are a bit-exact contract.
double inverse_normal_cdf(double p);

// Keyed deterministic random doubles: the same key words always produce the
// same value, on any thread, in any order.
uint64_t mix_words(uint64_t seed, uint64_t w0, uint64_t w1, uint64_t w2, uint64_t w3);
double hash_uniform(uint64_t seed, uint64_t tag, uint64_t item, uint64_t component);
double hash_normal(uint64_t seed, uint64_t tag, uint64_t item, uint64_t component);

// Two-sided Brownian increments on the grid cell [k dt, (k+1) dt), k in Z.
// increment(k) is a pure function of (master_seed, stream_id, n, dt, k);
// two sources with equal keys produce bit-identical values ("same omega").
// Changing dt produces a statistically fresh path, not a refinement.
class IncrementSource {
  public:
    IncrementSource(uint64_t master_seed, int n, double dt, uint64_t stream_id);

    // writes n components of N(0, dt I_n)
    void increment(int64_t k, double* out) const;
    std::vector<double> increment(int64_t k) const;

    // view with increment(k) = this->increment(k + s_cells); offsets compose
    IncrementSource shift(int64_t s_cells) const;

    uint64_t master_seed() const { return master_seed_; }
    uint64_t stream_id() const { return stream_id_; }
    int n() const { return n_; }
    double dt() const { return dt_; }
    int64_t offset() const { return offset_; }

  private:
    uint64_t master_seed_;
    uint64_t stream_id_;
    int n_;
    double dt_;
    double sqrt_dt_;
    uint64_t dt_bits_;
    int64_t offset_ = 0;
};

}  // namespace dwsync
