#include "kljn/privacy.hpp"

#include "kljn/errors.hpp"

namespace kljn {

void LeakModel::validate() const {
  if (kind == Kind::fraction_known) {
    if (value < 0.0 || value > 1.0)
      throw domain_error("leak model: fraction must be in [0, 1]");
  } else {
    if (value < 0.5 || value > 1.0)
      throw domain_error("leak model: guess probability must be in [0.5, 1]");
  }
}

double LeakModel::excess() const {
  return kind == Kind::fraction_known ? value : value - 0.5;
}

KeyMaterial xor_amplify(const KeyMaterial& key) {
  if (key.bits.size() < 2)
    throw domain_error("xor_amplify: key must hold at least 2 bits");
  KeyMaterial out;
  out.generation = key.generation + 1;
  out.trailing_bit_dropped = key.bits.size() % 2 != 0;
  const std::size_t pairs = key.bits.size() / 2;
  out.bits.resize(pairs);
  for (std::size_t j = 0; j < pairs; ++j)
    out.bits[j] = key.bits[2 * j] ^ key.bits[2 * j + 1];
  return out;
}

LeakModel eve_prob_after_xor(const LeakModel& model) {
  model.validate();
  LeakModel out = model;
  if (model.kind == LeakModel::Kind::fraction_known) {
    // Eve knows the XOR of a pair only when she knows both bits.
    out.value = model.value * model.value;
  } else {
    // Her pair guess is right when both bit guesses are right or both wrong.
    const double p = model.value;
    out.value = p * p + (1.0 - p) * (1.0 - p);
  }
  return out;
}

int iterations_needed(const LeakModel& model, double target_excess) {
  model.validate();
  if (!(target_excess > 0.0))
    throw domain_error("iterations_needed: target_excess must be > 0");
  if (model.excess() <= 0.0)
    throw domain_error("iterations_needed: model carries no information");
  if (model.excess() >= (model.kind == LeakModel::Kind::fraction_known ? 1.0
                                                                       : 0.5))
    throw domain_error("iterations_needed: full knowledge never converges");
  LeakModel m = model;
  int n = 0;
  while (m.excess() >= target_excess) {
    m = eve_prob_after_xor(m);
    ++n;
  }
  return n;
}

std::vector<double> empirical_amplification(
    const KeyMaterial& key, std::span<const std::uint8_t> eve_guesses,
    int iterations) {
  if (eve_guesses.size() != key.bits.size())
    throw domain_error("empirical_amplification: guess/key length mismatch");
  if (key.bits.empty())
    throw domain_error("empirical_amplification: empty key");
  if (iterations < 0)
    throw domain_error("empirical_amplification: negative iteration count");

  KeyMaterial truth = key;
  KeyMaterial eve;
  eve.bits.assign(eve_guesses.begin(), eve_guesses.end());

  auto agreement = [](const KeyMaterial& a, const KeyMaterial& b) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i)
      hits += a.bits[i] == b.bits[i];
    return static_cast<double>(hits) / static_cast<double>(a.bits.size());
  };

  std::vector<double> per_generation;
  per_generation.push_back(agreement(truth, eve));
  for (int g = 0; g < iterations; ++g) {
    truth = xor_amplify(truth);
    eve = xor_amplify(eve);
    per_generation.push_back(agreement(truth, eve));
  }
  return per_generation;
}

double quantum_detection_probability(long n_bits) {
  if (n_bits < 0)
    throw domain_error("quantum_detection_probability: n_bits must be >= 0");
  double q = 1.0;
  for (long i = 0; i < n_bits; ++i) q *= 0.75;
  return 1.0 - q;
}

}  // namespace kljn
