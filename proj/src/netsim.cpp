#include "hmpc/netsim.hpp"

#include <sstream>

namespace hmpc {

const char* to_string(Party p) {
  switch (p) {
    case Party::Client: return "Client";
    case Party::KH: return "KH";
    case Party::EVH: return "EVH";
    case Party::Helper: return "Helper";
    case Party::Helper2: return "Helper2";
  }
  return "?";
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::SecretSharing: return "SecretSharing";
    case Phase::Computation: return "Computation";
    case Phase::Reveal: return "Reveal";
  }
  return "?";
}

Party party_from_string(const std::string& s) {
  if (s == "Client") return Party::Client;
  if (s == "KH") return Party::KH;
  if (s == "EVH") return Party::EVH;
  if (s == "Helper") return Party::Helper;
  if (s == "Helper2") return Party::Helper2;
  throw std::invalid_argument("unknown party: " + s);
}

Phase phase_from_string(const std::string& s) {
  if (s == "SecretSharing") return Phase::SecretSharing;
  if (s == "Computation") return Phase::Computation;
  if (s == "Reveal") return Phase::Reveal;
  throw std::invalid_argument("unknown phase: " + s);
}

std::string serialize_transcript(const Transcript<Bit>& t) {
  auto msgs = t.messages;
  std::stable_sort(msgs.begin(), msgs.end(),
                   [](const Msg<Bit>& a, const Msg<Bit>& b) { return a.round < b.round; });
  std::ostringstream os;
  for (const auto& m : msgs)
    os << m.round << ' ' << to_string(m.from) << ' ' << to_string(m.to) << ' '
       << to_string(m.phase) << ' ' << m.label << ' ' << value_str(m.payload) << '\n';
  return os.str();
}

Transcript<Bit> parse_transcript(const std::string& text) {
  Transcript<Bit> t;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int round;
    std::string from, to, phase, label, bits;
    if (!(ls >> round >> from >> to >> phase >> label >> bits))
      throw std::invalid_argument("transcript line " + std::to_string(lineno) + ": malformed");
    Msg<Bit> m;
    m.round = round;
    m.from = party_from_string(from);
    m.to = party_from_string(to);
    m.phase = phase_from_string(phase);
    m.label = label;
    if (bits.empty() || (bits[0] != '0' && bits[0] != '1'))
      throw std::invalid_argument("transcript line " + std::to_string(lineno) + ": bad payload");
    m.payload = Bit(bits[0] - '0');
    t.messages.push_back(m);
  }
  return t;
}

}  // namespace hmpc
