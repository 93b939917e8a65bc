#ifndef KLJN_PRIVACY_HPP_
#define KLJN_PRIVACY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "kljn/protocol.hpp"

namespace kljn {

/// Model of Eve's partial knowledge of the raw key.
struct LeakModel {
  enum class Kind {
    fraction_known,  // value = fraction of bits Eve knows exactly, in [0, 1]
    biased_guess,    // value = per-bit correct-guess probability, in [0.5, 1]
  };
  Kind kind = Kind::fraction_known;
  double value = 0.0;

  void validate() const;
  /// Eve's advantage over blind guessing: f, or p - 1/2.
  double excess() const;
};

/// XOR of subsequent bit pairs; halves the key length and increments the
/// generation counter. An odd trailing bit is dropped and recorded.
/// Throws domain_error for keys shorter than 2 bits.
KeyMaterial xor_amplify(const KeyMaterial& key);

/// Eve's knowledge after one XOR pass: f -> f^2 for fraction_known,
/// p -> p^2 + (1-p)^2 for biased_guess.
LeakModel eve_prob_after_xor(const LeakModel& model);

/// Smallest number of XOR passes bringing the excess below target_excess.
/// Throws domain_error for uninformative or non-converging models.
int iterations_needed(const LeakModel& model, double target_excess);

/// Applies xor_amplify to the true key and to Eve's guessed key in lockstep
/// and reports Eve's agreement rate per generation (index 0 = raw).
/// Throws domain_error on length mismatch.
std::vector<double> empirical_amplification(
    const KeyMaterial& key, std::span<const std::uint8_t> eve_guesses,
    int iterations);

/// Probability that an intercept-resend eavesdropper on an N-bit quantum
/// exchange is uncovered: 1 - 0.75^N.
double quantum_detection_probability(long n_bits);

}  // namespace kljn

#endif  // KLJN_PRIVACY_HPP_
