#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmpc/netsim.hpp"

namespace hmpc {

/// Protocol layer on top of Env: client input sharing, XOR/NOT, the
/// three-party AND split into share-left / share-right / combine, its reuse
/// variants, re-encryption, the four-party AND and the fan-in-w AND.
///
/// Each variable carries up to two live encryptions. The first is used when
/// the variable stands on the left of an AND, the second when it stands on
/// the right; the right-side key is handed to the helper, so the two sides
/// must never share a key.
template <class B>
class Session {
 public:
  struct Config {
    bool four_party = false;
    int w_max = 16;
  };

  struct Handle {
    int var = -1;
    int enc = -1;
    friend bool operator==(Handle a, Handle b) { return a.var == b.var && a.enc == b.enc; }
  };

  struct EncInfo {
    std::string key_label, ct_label;
    std::string k2_label, k5_label, k6_label, d_label, e_label;
    bool left_shared = false, right_shared = false, right_retired = false;
    bool helper_knows_key = false;
  };

  Session(Env<B>& env, Config cfg = {}) : env_(env), cfg_(cfg) {}

  Env<B>& env() { return env_; }

  // ---- client side -------------------------------------------------------

  /// First encryption of a client secret: key pre-shared with the KH over
  /// the client-KH tape, ciphertext to the EVH (1 sharing-phase bit).
  Handle share_input(const std::string& var, const B& secret) {
    int vi = add_var(var, /*is_input=*/true);
    env_.hold_initial(Party::Client, var, secret);
    client_encrypt(vi);
    return Handle{vi, 0};
  }

  /// Second client-side encryption of an already shared input (1 more
  /// sharing-phase bit). Distinct key, so the two orientations of the
  /// variable never collide at the helper.
  Handle add_client_encryption(Handle h) {
    Var& v = var_at(h);
    if (!v.is_input) throw ProtocolError("second client encryption needs a client input");
    if (v.encs.size() >= 2) throw ProtocolError("slot budget exhausted");
    client_encrypt(h.var);
    return Handle{h.var, int(v.encs.size()) - 1};
  }

  B reveal(Handle h, int gate = -1) {
    const Enc& e = enc_at(h);
    env_.send(Party::EVH, Party::Client, Phase::Reveal, e.ct_label, env_.get(Party::EVH, e.ct_label), gate);
    env_.send(Party::KH, Party::Client, Phase::Reveal, e.key_label, env_.get(Party::KH, e.key_label), gate);
    return (env_.get(Party::Client, e.ct_label) ^ env_.get(Party::Client, e.key_label)).v;
  }

  // ---- local gates ---------------------------------------------------------

  Handle xor_gate(Handle x, Handle y, const std::string& name = "") {
    const Enc ex = enc_at(x), ey = enc_at(y);  // copies; vector may grow
    int vi = add_var(fresh_var(name, "xor"), false);
    Enc e;
    e.key_label = fresh_label("K" + vars_[vi].name);
    e.ct_label = enc_label(e.key_label, vars_[vi].name);
    env_.put(Party::KH, e.key_label,
             env_.get(Party::KH, ex.key_label) ^ env_.get(Party::KH, ey.key_label));
    env_.put(Party::EVH, e.ct_label,
             env_.get(Party::EVH, ex.ct_label) ^ env_.get(Party::EVH, ey.ct_label));
    vars_[vi].encs.push_back(e);
    return Handle{vi, 0};
  }

  /// NOT is local to the EVH: flip the ciphertext, keep the key.
  Handle not_gate(Handle x, const std::string& name = "") {
    const Enc ex = enc_at(x);
    int vi = add_var(fresh_var(name, "not"), false);
    Enc e;
    e.key_label = ex.key_label;  // key unchanged
    e.ct_label = enc_label(e.key_label, vars_[vi].name);
    env_.put(Party::EVH, e.ct_label, ~env_.get(Party::EVH, ex.ct_label));
    vars_[vi].encs.push_back(e);
    return Handle{vi, 0};
  }

  // ---- re-encryption -------------------------------------------------------

  /// New encryption of the same secret: the KH picks a fresh key and sends
  /// the old key encrypted under it to the EVH (1 bit), which re-keys its
  /// ciphertext locally. With `for_right_use` the fresh key comes from the
  /// KH-helper tape so the helper holds it at no cost.
  Handle reencrypt(Handle h, bool for_right_use = false, int gate = -1) {
    Var& v = var_at(h);
    if (v.encs.size() >= 2) throw ProtocolError("slot budget exhausted");
    const Enc old = v.encs[h.enc];
    Enc e;
    e.key_label = fresh_label("K" + v.name);
    e.ct_label = enc_label(e.key_label, v.name);
    e.helper_knows_key = for_right_use;
    Val<B> fresh_key = for_right_use ? env_.draw(Party::KH, Party::Helper, e.key_label)
                                     : env_.draw_own(Party::KH, e.key_label);
    // ENC[K'](K): 1 transmitted bit; the EVH learns nothing about K'.
    std::string lbl = enc_label(e.key_label, old.key_label);
    env_.send(Party::KH, Party::EVH, Phase::Computation, lbl,
              fresh_key ^ env_.get(Party::KH, old.key_label), gate);
    env_.put(Party::EVH, e.ct_label, env_.get(Party::EVH, old.ct_label) ^ env_.get(Party::EVH, lbl));
    v.encs.push_back(e);
    return Handle{h.var, int(v.encs.size()) - 1};
  }

  // ---- helper residency ----------------------------------------------------

  /// Left residency: the helper gets the ciphertext and the key encrypted
  /// under a fresh KH-EVH key (2 bits).
  void share_left(Handle h, int gate = -1) {
    Enc& e = enc_mut(h);
    if (e.left_shared) return;
    if (e.helper_knows_key)
      throw ProtocolError("encryption key resident at helper; re-encrypt before left use");
    e.k6_label = fresh_label("K6");
    Val<B> k6 = env_.draw(Party::KH, Party::EVH, e.k6_label);
    env_.send(Party::EVH, Party::Helper, Phase::Computation, e.ct_label,
              env_.get(Party::EVH, e.ct_label), gate);
    std::string lbl = enc_label(e.k6_label, e.key_label);
    env_.send(Party::KH, Party::Helper, Phase::Computation, lbl,
              k6 ^ env_.get(Party::KH, e.key_label), gate);
    e.left_shared = true;
  }

  /// Right residency: the helper holds the key (pre-shared or handed off),
  /// the KH gets the double-encrypted value and the K5-encrypted key
  /// material (2 bits).
  void share_right(Handle h, int gate = -1) {
    Var& v = var_at(h);
    Enc& e = v.encs[h.enc];
    if (e.right_shared) return;
    if (e.left_shared)
      throw ProtocolError("left-shared encryption cannot be granted for right use");
    if (!e.helper_knows_key) {
      if (!v.is_input)
        throw ProtocolError("derived value must be re-encrypted before right use");
      env_.grant(Party::KH, Party::Helper, e.key_label);
      e.helper_knows_key = true;
    }
    e.k2_label = fresh_label("K2");
    e.k5_label = fresh_label("K5");
    Val<B> k2 = env_.draw(Party::EVH, Party::Helper, e.k2_label);
    Val<B> k5 = env_.draw(Party::EVH, Party::Helper, e.k5_label);
    e.d_label = "ENC[" + e.k2_label + "+" + e.key_label + "](" + v.name + ")";
    env_.send(Party::EVH, Party::KH, Phase::Computation, e.d_label,
              env_.get(Party::EVH, e.ct_label) ^ k2, gate);
    e.e_label = "ENC[" + e.k5_label + "](" + e.key_label + "+" + e.k2_label + ")";
    env_.send(Party::Helper, Party::KH, Phase::Computation, e.e_label,
              env_.get(Party::Helper, e.key_label) ^ k2 ^ k5, gate);
    e.right_shared = true;
  }

  /// Mark a right residency as stale; the next right use re-keys it
  /// (the 2-bit re-encrypting reuse) instead of reusing it directly.
  void retire_right(Handle h) {
    Enc& e = enc_mut(h);
    if (!e.right_shared) throw ProtocolError("shares not resident at helper");
    e.right_retired = true;
  }

  /// Re-key a retired right residency with a fresh key from the KH-helper
  /// tape (1 bit: the old key encrypted under the new one, to the EVH).
  /// K2/K5 and the doubly encrypted material are retained: the KH and EVH
  /// re-derive them locally.
  void rotate_right(Handle h, int gate = -1) {
    Var& v = var_at(h);
    Enc& e = v.encs[h.enc];
    if (!e.right_shared) throw ProtocolError("shares not resident at helper");
    std::string nk = fresh_label("K" + v.name);
    Val<B> fresh_key = env_.draw(Party::KH, Party::Helper, nk);
    Val<B> old_key_kh = env_.get(Party::KH, e.key_label);
    std::string lbl = enc_label(nk, e.key_label);
    env_.send(Party::KH, Party::EVH, Phase::Computation, lbl, fresh_key ^ old_key_kh, gate);

    // EVH re-keys its ciphertext; KH re-derives the doubles it holds.
    std::string nct = enc_label(nk, v.name);
    env_.put(Party::EVH, nct, env_.get(Party::EVH, e.ct_label) ^ env_.get(Party::EVH, lbl));
    std::string nd = "ENC[" + e.k2_label + "+" + nk + "](" + v.name + ")";
    std::string ne = "ENC[" + e.k5_label + "](" + nk + "+" + e.k2_label + ")";
    Val<B> delta = old_key_kh ^ fresh_key;
    env_.put(Party::KH, nd, env_.get(Party::KH, e.d_label) ^ delta);
    env_.put(Party::KH, ne, env_.get(Party::KH, e.e_label) ^ delta);

    e.key_label = nk;
    e.ct_label = nct;
    e.d_label = nd;
    e.e_label = ne;
    e.helper_knows_key = true;
    e.right_retired = false;
  }

  // ---- AND protocols -------------------------------------------------------

  /// Three-party AND. Shares operands with the helper inline as needed:
  /// fresh operands cost 5 bits in 2 rounds, fully resident ones 1 bit.
  Handle and3(Handle x, Handle y, const std::string& name = "") {
    check_operands(x, y);
    int g = next_gate_++;
    if (enc_at(y).right_shared && enc_at(y).right_retired) rotate_right(y, g);
    share_left(x, g);
    share_right(y, g);
    return combine(x, y, g, name);
  }

  /// Both operands already resident at the helper: 1 bit.
  Handle and3_reuse_both(Handle x, Handle y, const std::string& name = "") {
    check_operands(x, y);
    if (!enc_at(x).left_shared || !enc_at(y).right_shared || enc_at(y).right_retired)
      throw ProtocolError("shares not resident at helper");
    return combine(x, y, next_gate_++, name);
  }

  /// Left operand resident, right operand fresh: 3 bits.
  Handle and3_reuse_left(Handle x, Handle y, const std::string& name = "") {
    check_operands(x, y);
    if (!enc_at(x).left_shared) throw ProtocolError("shares not resident at helper");
    if (enc_at(y).right_shared) throw ProtocolError("right operand already resident");
    int g = next_gate_++;
    share_right(y, g);
    return combine(x, y, g, name);
  }

  /// Left operand resident, right operand's retired residency re-keyed:
  /// 2 bits.
  Handle and3_reuse_reencrypt(Handle x, Handle y, const std::string& name = "") {
    check_operands(x, y);
    if (!enc_at(x).left_shared) throw ProtocolError("shares not resident at helper");
    if (!enc_at(y).right_shared || !enc_at(y).right_retired)
      throw ProtocolError("retired right share required");
    int g = next_gate_++;
    rotate_right(y, g);
    return combine(x, y, g, name);
  }

  /// Four-party AND: the two cross terms go to dedicated helpers, each
  /// returning its term under a fresh key (4 bits, 2 rounds).
  Handle and4(Handle x, Handle y, const std::string& name = "") {
    if (!cfg_.four_party) throw ProtocolError("four-party topology required");
    check_operands(x, y);
    int g = next_gate_++;
    const Enc ex = enc_at(x), ey = enc_at(y);
    env_.grant(Party::KH, Party::Helper, ey.key_label);
    env_.grant(Party::KH, Party::Helper2, ex.key_label);
    env_.send(Party::EVH, Party::Helper, Phase::Computation, ex.ct_label,
              env_.get(Party::EVH, ex.ct_label), g);
    env_.send(Party::EVH, Party::Helper2, Phase::Computation, ey.ct_label,
              env_.get(Party::EVH, ey.ct_label), g);
    std::string k3l = fresh_label("K3"), k4l = fresh_label("K4");
    Val<B> k3 = env_.draw(Party::KH, Party::Helper, k3l);
    Val<B> k4 = env_.draw(Party::KH, Party::Helper2, k4l);

    Val<B> t1 = env_.get(Party::Helper, ex.ct_label) & env_.get(Party::Helper, ey.key_label);
    std::string t1l = enc_label(k3l, "t1@" + std::to_string(g));
    env_.send(Party::Helper, Party::EVH, Phase::Computation, t1l, t1 ^ k3, g);
    Val<B> t2 = env_.get(Party::Helper2, ex.key_label) & env_.get(Party::Helper2, ey.ct_label);
    std::string t2l = enc_label(k4l, "t2@" + std::to_string(g));
    env_.send(Party::Helper2, Party::EVH, Phase::Computation, t2l, t2 ^ k4, g);

    int vi = add_var(fresh_var(name, "and"), false);
    Enc e;
    e.key_label = fresh_label("K" + vars_[vi].name);
    e.ct_label = enc_label(e.key_label, vars_[vi].name);
    Val<B> t0 = env_.get(Party::EVH, ex.ct_label) & env_.get(Party::EVH, ey.ct_label);
    env_.put(Party::EVH, e.ct_label, t0 ^ env_.get(Party::EVH, t1l) ^ env_.get(Party::EVH, t2l));
    Val<B> t3 = env_.get(Party::KH, ex.key_label) & env_.get(Party::KH, ey.key_label);
    env_.put(Party::KH, e.key_label, t3 ^ k3 ^ k4);
    vars_[vi].encs.push_back(e);
    return Handle{vi, 0};
  }

  /// Fan-in-w AND via the 2^w subset-term expansion: per term the EVH ANDs
  /// its encrypted values, the KH its keys, the pair is re-shared as two
  /// fresh secrets and combined with the pairwise protocol, all terms in
  /// parallel (2 rounds); the results fold together locally.
  Handle fanin_and(const std::vector<Handle>& xs, const std::string& name = "") {
    if (xs.empty()) throw ProtocolError("empty gate");
    if (int(xs.size()) > cfg_.w_max) throw ProtocolError("fan-in budget");
    int w = int(xs.size());
    last_fanin_terms_ = 1 << w;
    if (w == 1) return xs[0];
    int g = next_gate_++;
    std::string gs = std::to_string(g);

    std::vector<Handle> terms;
    for (int s = 0; s < (1 << w); ++s) {
      std::string ss = subset_str(s, w);
      // Local term halves.
      Val<B> te{B(1), 0}, tk{B(1), 0};
      for (int j = 0; j < w; ++j) {
        const Enc& ej = enc_at(xs[j]);
        if (s >> j & 1)
          te = te & env_.get(Party::EVH, ej.ct_label);
        else
          tk = tk & env_.get(Party::KH, ej.key_label);
      }
      // Re-share: the EVH keeps its half encrypted under a key pre-shared
      // with the KH; the KH transmits its encrypted half (1 bit per term).
      int tev = add_var("tE[" + ss + "]@" + gs, false);
      Enc tee;
      tee.key_label = "KtE[" + ss + "]@" + gs;
      tee.ct_label = enc_label(tee.key_label, vars_[tev].name);
      Val<B> kte = env_.draw(Party::EVH, Party::KH, tee.key_label);
      env_.put(Party::EVH, tee.ct_label, te ^ kte);
      vars_[tev].encs.push_back(tee);

      int tkv = add_var("tK[" + ss + "]@" + gs, false);
      Enc tke;
      tke.key_label = "KtK[" + ss + "]@" + gs;
      tke.ct_label = enc_label(tke.key_label, vars_[tkv].name);
      tke.helper_knows_key = true;  // drawn on the KH-helper tape
      Val<B> ktk = env_.draw(Party::KH, Party::Helper, tke.key_label);
      env_.put(Party::KH, "tK[" + ss + "]@" + gs, tk);
      env_.send(Party::KH, Party::EVH, Phase::Computation, tke.ct_label, tk ^ ktk, g);
      vars_[tkv].encs.push_back(tke);

      Handle hte{tev, 0}, htk{tkv, 0};
      share_left(hte, g);
      share_right(htk, g);
      terms.push_back(combine(hte, htk, g, "t[" + ss + "]@" + gs, /*fresh_output_pad=*/false));
    }

    // Fold terms and pad the final result so it is a reusable share.
    int vi = add_var(fresh_var(name, "andn"), false);
    Enc e;
    e.key_label = fresh_label("K" + vars_[vi].name);
    e.ct_label = enc_label(e.key_label, vars_[vi].name);
    std::string k8l = fresh_label("K8");
    Val<B> k8 = env_.draw(Party::KH, Party::EVH, k8l);
    Val<B> c = k8, k = k8;
    for (const Handle& th : terms) {
      c = c ^ env_.get(Party::EVH, enc_at(th).ct_label);
      k = k ^ env_.get(Party::KH, enc_at(th).key_label);
    }
    env_.put(Party::EVH, e.ct_label, c);
    env_.put(Party::KH, e.key_label, k);
    vars_[vi].encs.push_back(e);
    return Handle{vi, 0};
  }

  // ---- introspection -------------------------------------------------------

  EncInfo info(Handle h) const {
    const Enc& e = enc_at(h);
    return EncInfo{e.key_label, e.ct_label, e.k2_label, e.k5_label,  e.k6_label,
                   e.d_label,   e.e_label,  e.left_shared, e.right_shared,
                   e.right_retired, e.helper_knows_key};
  }
  const std::string& var_name(Handle h) const { return vars_.at(h.var).name; }
  int last_fanin_terms() const { return last_fanin_terms_; }
  int gates_used() const { return next_gate_; }

  /// Names of all registered variables (inputs and gate outputs); these are
  /// the secrets the holdings audit protects.
  std::vector<std::string> secret_names() const {
    std::vector<std::string> out;
    for (const auto& v : vars_) out.push_back(v.name);
    return out;
  }

 private:
  struct Enc {
    std::string key_label, ct_label;
    bool helper_knows_key = false;
    bool left_shared = false;
    std::string k6_label;
    bool right_shared = false;
    bool right_retired = false;
    std::string k2_label, k5_label, d_label, e_label;
  };
  struct Var {
    std::string name;
    bool is_input = false;
    std::vector<Enc> encs;
  };

  int add_var(const std::string& name, bool is_input) {
    for (const auto& v : vars_)
      if (v.name == name) throw ProtocolError("duplicate variable: " + name);
    vars_.push_back(Var{name, is_input, {}});
    return int(vars_.size()) - 1;
  }

  void client_encrypt(int vi) {
    Var& v = vars_[vi];
    Enc e;
    e.key_label = fresh_label("K" + v.name);
    e.ct_label = enc_label(e.key_label, v.name);
    Val<B> key = env_.draw(Party::Client, Party::KH, e.key_label);
    env_.send(Party::Client, Party::EVH, Phase::SecretSharing, e.ct_label,
              env_.get(Party::Client, v.name) ^ key);
    v.encs.push_back(e);
  }

  /// The shared AND core over one left-resident and one right-resident
  /// operand: the helper returns its combined cross term under a fresh key
  /// (1 bit); the KH and EVH fold their local terms.
  Handle combine(Handle x, Handle y, int g, const std::string& name,
                 bool fresh_output_pad = true) {
    const Enc ex = enc_at(x), ey = enc_at(y);
    std::string k7l = fresh_label("K7");
    Val<B> k7 = env_.draw(Party::KH, Party::Helper, k7l);

    // Helper: t4 = (ENC[P](x) ^ ENC[K6](P)) & (Q ^ K2) = (x ^ K6) & (Q ^ K2).
    Val<B> t4 = (env_.get(Party::Helper, ex.ct_label) ^
                 env_.get(Party::Helper, enc_label(ex.k6_label, ex.key_label))) &
                (env_.get(Party::Helper, ey.key_label) ^ env_.get(Party::Helper, ey.k2_label));
    std::string t4l = enc_label(k7l, "t4@" + std::to_string(g));
    env_.send(Party::Helper, Party::EVH, Phase::Computation, t4l, t4 ^ k7, g);

    int vi = add_var(fresh_var(name, "and"), false);
    Enc e;
    e.key_label = fresh_label("K" + vars_[vi].name);
    e.ct_label = enc_label(e.key_label, vars_[vi].name);

    Val<B> pad{B(0), 0};
    if (fresh_output_pad) {
      std::string k8l = fresh_label("K8");
      pad = env_.draw(Party::KH, Party::EVH, k8l);
    }
    // EVH: t0 ^ (K5 & K6) ^ ENC[K7](t4) ^ K8.
    Val<B> t0 = env_.get(Party::EVH, ex.ct_label) &
                (env_.get(Party::EVH, ey.ct_label) ^ env_.get(Party::EVH, ey.k2_label));
    Val<B> k5k6 = env_.get(Party::EVH, ey.k5_label) & env_.get(Party::EVH, ex.k6_label);
    env_.put(Party::EVH, e.ct_label, t0 ^ k5k6 ^ env_.get(Party::EVH, t4l) ^ pad);
    // KH: t2 ^ t3 ^ K7 ^ K8.
    Val<B> t2 = env_.get(Party::KH, ex.key_label) & env_.get(Party::KH, ey.d_label);
    Val<B> t3 = env_.get(Party::KH, ex.k6_label) & env_.get(Party::KH, ey.e_label);
    env_.put(Party::KH, e.key_label, t2 ^ t3 ^ k7 ^ pad);
    vars_[vi].encs.push_back(e);
    return Handle{vi, 0};
  }

  void check_operands(Handle x, Handle y) const {
    enc_at(x), enc_at(y);
    if (x.var == y.var && x.enc == y.enc) throw ProtocolError("operand aliasing");
  }

  const Enc& enc_at(Handle h) const {
    if (h.var < 0 || h.var >= int(vars_.size())) throw ProtocolError("dangling handle");
    const Var& v = vars_[h.var];
    if (h.enc < 0 || h.enc >= int(v.encs.size())) throw ProtocolError("dangling handle");
    return v.encs[h.enc];
  }
  Enc& enc_mut(Handle h) { return const_cast<Enc&>(enc_at(h)); }
  Var& var_at(Handle h) {
    enc_at(h);
    return vars_[h.var];
  }

  static std::string enc_label(const std::string& key, const std::string& payload) {
    return "ENC[" + key + "](" + payload + ")";
  }
  static std::string subset_str(int s, int w) {
    std::string out(w, '0');
    for (int j = 0; j < w; ++j)
      if (s >> j & 1) out[j] = '1';
    return out;
  }

  /// First request for a base label gets the bare name, later ones get
  /// primes: K7, K7', K7''...
  std::string fresh_label(const std::string& base) {
    int n = label_uses_[base]++;
    return base + std::string(n, '\'');
  }
  std::string fresh_var(const std::string& name, const char* kind) {
    if (!name.empty()) return name;
    return std::string(kind) + "#" + std::to_string(anon_counter_++);
  }

  Env<B>& env_;
  Config cfg_;
  std::vector<Var> vars_;
  std::map<std::string, int> label_uses_;
  int next_gate_ = 0;
  int anon_counter_ = 0;
  int last_fanin_terms_ = 0;
};

}  // namespace hmpc
