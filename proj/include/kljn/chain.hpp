#ifndef KLJN_CHAIN_HPP_
#define KLJN_CHAIN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "kljn/protocol.hpp"

namespace kljn {

/// One node of the chain network. Keys are consumed strictly in order via
/// the per-side cursors so no pad bit is ever reused.
struct ChainAgent {
  int id = 0;
  KeyMaterial left_key;   // shared with agent id-1; empty at the left end
  KeyMaterial right_key;  // shared with agent id+1; empty at the right end
  std::size_t left_cursor = 0;
  std::size_t right_cursor = 0;
};

struct Chain {
  std::vector<ChainAgent> agents;
  std::size_t n_agents() const { return agents.size(); }
  std::size_t n_links() const {
    return agents.empty() ? 0 : agents.size() - 1;
  }
  /// Total key bits consumed so far, summed over the sending side of every
  /// link.
  std::size_t consumed_key_bits() const;
};

/// Coordinator-side record of every broadcast hop bit.
struct PublicTranscript {
  struct Record {
    int hop = 0;  // link index, 0 = between agents 0 and 1
    std::uint8_t broadcast_bit = 0;
  };
  std::vector<Record> records;
};

/// Establishes all n_agents-1 neighbor keys by running one key exchange per
/// link (periods_per_link clock periods each, link seeds derived from seed).
/// Throws domain_error for n_agents < 2.
Chain build_chain(int n_agents, const ProtocolConfig& config,
                  std::size_t periods_per_link, std::uint64_t seed);

/// Assembles a chain directly from per-link key material (both ends of each
/// link receive the same bits). Used for logic-level studies.
Chain chain_from_keys(std::vector<KeyMaterial> link_keys);

/// Relays one bit from source_agent to the right end of the chain: each hop
/// broadcasts bit XOR pad over the public channel and the receiver strips
/// the pad, so intermediate agents never see the bit itself. Consumes one
/// key bit per hop. Throws resource_error when a link's pad is exhausted.
std::uint8_t teleclone_bit(Chain& chain, int source_agent, std::uint8_t bit,
                           PublicTranscript& transcript);

std::vector<std::uint8_t> teleclone_sequence(Chain& chain, int source_agent,
                                             std::span<const std::uint8_t> bits,
                                             PublicTranscript& transcript);

struct HopIndependence {
  int hop = 0;
  double correlation = 0.0;
  bool degenerate = false;  // zero-variance margin, statistic undefined
  bool secure = false;      // !degenerate and |correlation| < 4/sqrt(n)
};

/// Correlation between each hop's broadcast bits and the source bits.
/// Requires at least 10^4 telecloned bits; throws domain_error otherwise.
std::vector<HopIndependence> transcript_independence_test(
    const PublicTranscript& transcript, std::span<const std::uint8_t> source_bits);

}  // namespace kljn

#endif  // KLJN_CHAIN_HPP_
