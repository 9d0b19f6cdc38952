#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmpc/anf.hpp"
#include "hmpc/bit.hpp"
#include "hmpc/rat.hpp"

namespace hmpc {

enum class Party : std::uint8_t { Client, KH, EVH, Helper, Helper2 };
enum class Phase : std::uint8_t { SecretSharing, Computation, Reveal };

const char* to_string(Party p);
const char* to_string(Phase p);
Party party_from_string(const std::string& s);
Phase phase_from_string(const std::string& s);

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int payload_bits(const Bit&) { return 1; }
inline int payload_bits(const anf::Poly&) { return 1; }
inline int payload_bits(const Rat& r) { return rat_payload_bits(r); }

inline std::string value_str(const Bit& b) { return b.v ? "1" : "0"; }
inline std::string value_str(const anf::Poly& p) { return p.str(); }
inline std::string value_str(const Rat& r) { return rat_str(r); }

/// A value at a party, tagged with the earliest round it may be sent in.
/// Pre-shared randomness and initial holdings are sendable from round 1;
/// a message received in round r is first forwardable in round r+1.
template <class B>
struct Val {
  B v{};
  int ready = 0;

  friend Val operator^(const Val& a, const Val& b) { return {a.v ^ b.v, std::max(a.ready, b.ready)}; }
  friend Val operator&(const Val& a, const Val& b) { return {a.v & b.v, std::max(a.ready, b.ready)}; }
  friend Val operator~(const Val& a) { return {~a.v, a.ready}; }
};

template <class B>
struct Msg {
  int round;
  Party from, to;
  Phase phase;
  std::string label;
  B payload;
  int gate = -1;  // -1: not attributed to a gate
};

enum class ViewKind : std::uint8_t { Initial, Draw, Grant, Recv };

template <class B>
struct ViewEntry {
  ViewKind kind;
  std::string label;
  B value;
};

struct CostReport {
  long computation_bits = 0;
  long sharing_bits = 0;
  long reveal_bits = 0;
  int rounds = 0;
  struct GateCost {
    int gate;
    long bits;
    int rounds;
  };
  std::vector<GateCost> per_gate;
};

template <class B>
struct Transcript {
  std::vector<Msg<B>> messages;
  std::map<Party, std::vector<ViewEntry<B>>> views;
  std::map<Party, std::vector<std::pair<std::string, B>>> final_holdings;
};

/// Deterministic round-synchronous simulator of the client and computing
/// parties. Pre-shared keys are tape draws, never messages; the transcript
/// holds only transmitted values, so cost extraction sees exactly the
/// communicated bits.
template <class B>
class Env {
 public:
  /// Drawer for pairwise pre-shared randomness. `range` is 0 for a bit
  /// draw and >=1 for a uniform integer draw in [0, range).
  using DrawFn = std::function<B(Party, Party, const std::string&, long long range)>;

  explicit Env(DrawFn drawer) : drawer_(std::move(drawer)) {}

  /// Draw from the pre-shared tape of pair {a, b}; both parties see it.
  Val<B> draw(Party a, Party b, const std::string& label, long long range = 0) {
    if (a == b) throw ProtocolError("draw: use draw_own for party-local randomness");
    auto [lo, hi] = std::minmax(a, b);
    B v = drawer_(lo, hi, label, range);
    record_view(a, ViewKind::Draw, label, v);
    record_view(b, ViewKind::Draw, label, v);
    put(a, label, Val<B>{v, 0});
    put(b, label, Val<B>{v, 0});
    ++draw_count_;
    return Val<B>{v, 0};
  }

  /// Party-local randomness (a tape the party shares with nobody).
  Val<B> draw_own(Party p, const std::string& label, long long range = 0) {
    B v = drawer_(p, p, label, range);
    record_view(p, ViewKind::Draw, label, v);
    put(p, label, Val<B>{v, 0});
    ++draw_count_;
    return Val<B>{v, 0};
  }

  /// Zero-cost hand-off of pre-shared key material (input-independent
  /// randomness only). Not a message: contributes no transmitted bits,
  /// but enters the grantee's view.
  void grant(Party from, Party to, const std::string& label) {
    const Val<B>& v = get(from, label);
    if (v.ready != 0)
      throw ProtocolError("grant: '" + label + "' is not pre-shared randomness");
    record_view(to, ViewKind::Grant, label, v.v);
    put(to, label, v);
    grants_.push_back({from, to, label});
  }

  /// Record a value the party holds before the protocol starts
  /// (the client's secrets).
  void hold_initial(Party p, const std::string& label, B v) {
    record_view(p, ViewKind::Initial, label, v);
    put(p, label, Val<B>{v, 0});
  }

  /// Send a value; the round is the earliest the payload allows.
  /// SecretSharing messages originate at the client (round 0); Reveal
  /// messages terminate at the client.
  int send(Party from, Party to, Phase phase, const std::string& label, const Val<B>& v,
           int gate = -1) {
    int round;
    switch (phase) {
      case Phase::SecretSharing:
        if (from != Party::Client)
          throw ProtocolError("phase separation: SecretSharing must originate at the client");
        round = 0;
        break;
      case Phase::Reveal:
        if (to != Party::Client)
          throw ProtocolError("phase separation: Reveal must terminate at the client");
        round = std::max(1, v.ready);
        break;
      case Phase::Computation:
      default:
        round = std::max(1, v.ready);
        break;
    }
    deliver(from, to, phase, label, v.v, round, gate);
    return round;
  }

  /// Send pinned to an explicit round; rejects rounds the payload cannot
  /// causally reach.
  void send_at(int round, Party from, Party to, Phase phase, const std::string& label,
               const Val<B>& v, int gate = -1) {
    if (round < v.ready)
      throw ProtocolError("causality violation: '" + label + "' is not available in round " +
                          std::to_string(round));
    deliver(from, to, phase, label, v.v, round, gate);
  }

  void put(Party p, const std::string& label, Val<B> v) { store_[p][label] = std::move(v); }

  const Val<B>& get(Party p, const std::string& label) const {
    auto ps = store_.find(p);
    if (ps != store_.end()) {
      auto it = ps->second.find(label);
      if (it != ps->second.end()) return it->second;
    }
    throw ProtocolError(std::string("causality violation: ") + to_string(p) +
                        " does not hold '" + label + "'");
  }

  bool holds(Party p, const std::string& label) const {
    auto ps = store_.find(p);
    return ps != store_.end() && ps->second.count(label) > 0;
  }

  const std::vector<Msg<B>>& messages() const { return msgs_; }
  const std::vector<ViewEntry<B>>& view(Party p) const {
    static const std::vector<ViewEntry<B>> empty;
    auto it = views_.find(p);
    return it == views_.end() ? empty : it->second;
  }
  int draw_count() const { return draw_count_; }

  Transcript<B> transcript() const {
    Transcript<B> t;
    t.messages = msgs_;
    t.views = views_;
    for (const auto& [p, m] : store_) {
      auto& h = t.final_holdings[p];
      for (const auto& [label, val] : m) h.emplace_back(label, val.v);
    }
    return t;
  }

 private:
  struct GrantRec {
    Party from, to;
    std::string label;
  };

  void deliver(Party from, Party to, Phase phase, const std::string& label, const B& v, int round,
               int gate) {
    msgs_.push_back(Msg<B>{round, from, to, phase, label, v, gate});
    record_view(to, ViewKind::Recv, label, v);
    put(to, label, Val<B>{v, round + 1});
  }

  void record_view(Party p, ViewKind k, const std::string& label, const B& v) {
    views_[p].push_back(ViewEntry<B>{k, label, v});
  }

  DrawFn drawer_;
  std::map<Party, std::map<std::string, Val<B>>> store_;
  std::map<Party, std::vector<ViewEntry<B>>> views_;
  std::vector<Msg<B>> msgs_;
  std::vector<GrantRec> grants_;
  int draw_count_ = 0;
};

/// Bit and round accounting per the model: computation counts only
/// Computation-phase payloads, client distribution and reveal are reported
/// separately, and rounds span the Computation messages.
template <class B>
CostReport cost_of(const Transcript<B>& t) {
  CostReport r;
  int lo = 0, hi = -1;
  std::map<int, std::pair<long, std::pair<int, int>>> per_gate;  // gate -> (bits, (lo, hi))
  for (const auto& m : t.messages) {
    int bits = payload_bits(m.payload);
    switch (m.phase) {
      case Phase::SecretSharing:
        r.sharing_bits += bits;
        break;
      case Phase::Reveal:
        r.reveal_bits += bits;
        break;
      case Phase::Computation: {
        r.computation_bits += bits;
        if (hi < lo) {
          lo = hi = m.round;
        } else {
          lo = std::min(lo, m.round);
          hi = std::max(hi, m.round);
        }
        if (m.gate >= 0) {
          auto it = per_gate.find(m.gate);
          if (it == per_gate.end()) {
            per_gate[m.gate] = {bits, {m.round, m.round}};
          } else {
            it->second.first += bits;
            it->second.second.first = std::min(it->second.second.first, m.round);
            it->second.second.second = std::max(it->second.second.second, m.round);
          }
        }
        break;
      }
    }
  }
  r.rounds = hi < lo ? 0 : hi - lo + 1;
  for (const auto& [g, v] : per_gate)
    r.per_gate.push_back({g, v.first, v.second.second - v.second.first + 1});
  return r;
}

template <class B>
const std::vector<ViewEntry<B>>& view_of(const Transcript<B>& t, Party p) {
  static const std::vector<ViewEntry<B>> empty;
  auto it = t.views.find(p);
  return it == t.views.end() ? empty : it->second;
}

/// Line-oriented text format: `round from to phase label bits`, one
/// message per line in round order.
std::string serialize_transcript(const Transcript<Bit>& t);

/// Parse the line format back into a bit-transcript (messages only).
Transcript<Bit> parse_transcript(const std::string& text);

}  // namespace hmpc
