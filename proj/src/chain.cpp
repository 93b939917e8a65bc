#include "kljn/chain.hpp"

#include <array>
#include <cmath>
#include <string>

#include "kljn/errors.hpp"
#include "kljn/seed.hpp"

namespace kljn {

std::size_t Chain::consumed_key_bits() const {
  std::size_t total = 0;
  for (const ChainAgent& a : agents) total += a.right_cursor;
  return total;
}

Chain build_chain(int n_agents, const ProtocolConfig& config,
                  std::size_t periods_per_link, std::uint64_t seed) {
  if (n_agents < 2)
    throw domain_error("build_chain: need at least 2 agents for a link");
  Chain chain;
  chain.agents.resize(static_cast<std::size_t>(n_agents));
  for (int i = 0; i < n_agents; ++i) chain.agents[i].id = i;
  for (int link = 0; link + 1 < n_agents; ++link) {
    const ExchangeResult ex =
        run_exchange(config, periods_per_link,
                     derive_seed(seed, "chain-link", link));
    chain.agents[link].right_key = ex.alice_key;
    chain.agents[link + 1].left_key = ex.bob_key;
  }
  return chain;
}

Chain chain_from_keys(std::vector<KeyMaterial> link_keys) {
  Chain chain;
  chain.agents.resize(link_keys.size() + 1);
  for (std::size_t i = 0; i < chain.agents.size(); ++i)
    chain.agents[i].id = static_cast<int>(i);
  for (std::size_t link = 0; link < link_keys.size(); ++link) {
    chain.agents[link].right_key = link_keys[link];
    chain.agents[link + 1].left_key = std::move(link_keys[link]);
  }
  return chain;
}

std::uint8_t teleclone_bit(Chain& chain, int source_agent, std::uint8_t bit,
                           PublicTranscript& transcript) {
  if (source_agent < 0 ||
      static_cast<std::size_t>(source_agent) + 1 >= chain.n_agents())
    throw domain_error("teleclone_bit: source agent has no right neighbor");
  std::uint8_t carried = bit & 1u;
  for (std::size_t hop = static_cast<std::size_t>(source_agent);
       hop + 1 < chain.n_agents(); ++hop) {
    ChainAgent& sender = chain.agents[hop];
    ChainAgent& receiver = chain.agents[hop + 1];
    if (sender.right_cursor >= sender.right_key.bits.size() ||
        receiver.left_cursor >= receiver.left_key.bits.size())
      throw resource_error("teleclone_bit: key material exhausted on link " +
                           std::to_string(hop));
    const std::uint8_t pad_send = sender.right_key.bits[sender.right_cursor++];
    const std::uint8_t pad_recv = receiver.left_key.bits[receiver.left_cursor++];
    const std::uint8_t broadcast = carried ^ pad_send;
    transcript.records.push_back({static_cast<int>(hop), broadcast});
    carried = broadcast ^ pad_recv;
  }
  return carried;
}

std::vector<std::uint8_t> teleclone_sequence(Chain& chain, int source_agent,
                                             std::span<const std::uint8_t> bits,
                                             PublicTranscript& transcript) {
  std::vector<std::uint8_t> delivered;
  delivered.reserve(bits.size());
  for (std::uint8_t b : bits)
    delivered.push_back(teleclone_bit(chain, source_agent, b, transcript));
  return delivered;
}

std::vector<HopIndependence> transcript_independence_test(
    const PublicTranscript& transcript,
    std::span<const std::uint8_t> source_bits) {
  if (source_bits.size() < 10000)
    throw domain_error(
        "transcript_independence_test: needs at least 10^4 telecloned bits");
  if (transcript.records.empty() ||
      transcript.records.size() % source_bits.size() != 0)
    throw domain_error(
        "transcript_independence_test: transcript/source size mismatch");

  const std::size_t n = source_bits.size();
  const std::size_t hops = transcript.records.size() / n;
  std::vector<HopIndependence> out(hops);

  for (std::size_t h = 0; h < hops; ++h) out[h].hop = transcript.records[h].hop;

  // The transcript is ordered hop-major within each bit.
  std::vector<std::array<std::size_t, 4>> counts(hops, {0, 0, 0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < hops; ++h) {
      const std::uint8_t c =
          transcript.records[i * hops + h].broadcast_bit & 1u;
      const std::uint8_t s = source_bits[i] & 1u;
      ++counts[h][(s << 1) | c];
    }
  }
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t h = 0; h < hops; ++h) {
    const double n00 = static_cast<double>(counts[h][0]);
    const double n01 = static_cast<double>(counts[h][1]);
    const double n10 = static_cast<double>(counts[h][2]);
    const double n11 = static_cast<double>(counts[h][3]);
    const double s0 = n00 + n01, s1 = n10 + n11;
    const double c0 = n00 + n10, c1 = n01 + n11;
    const double denom = s0 * s1 * c0 * c1;
    if (denom <= 0.0) {
      out[h].degenerate = true;
      out[h].correlation = 0.0;
      out[h].secure = false;
    } else {
      out[h].correlation = (n11 * n00 - n10 * n01) / std::sqrt(denom);
      out[h].secure = std::abs(out[h].correlation) < bound;
    }
  }
  return out;
}

}  // namespace kljn
