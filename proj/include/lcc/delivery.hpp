#pragma once

// Multi-rate coded delivery over a state-wise placement.
//
// With t_i = t(s_i) and t_hat = min_i t_i over the multicast users, one codeword
// is sent per (t_hat + 1)-subset U. For each i in U the payload Y_{U,i} carries
// one chunk of every subfile W_V(s_i) with U \ {i} contained in V and i not in V;
// each such subfile is cut into alpha_i = C(t_i, t_hat) chunks. Payloads are
// nested so that user i decodes at its own rate r_i, and the codeword lasts as
// long as its slowest payload.

#include "lcc/placement.hpp"
#include "lcc/types.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace lcc {

/// State index (0-based) of every user.
struct UserRealization {
  std::vector<int> states;

  int num_users() const { return static_cast<int>(states.size()); }
};

struct ChunkRef {
  SubfileId subfile;
  int chunk_index = 1;  // 1..alpha
  Rational size{0};

  friend bool operator==(const ChunkRef&, const ChunkRef&) = default;
};

struct Payload {
  int user = 0;
  std::vector<ChunkRef> chunks;  // concatenation order
  Rational volume{0};
  double time = 0;  // volume / r_i
};

struct Codeword {
  UserSet group;
  std::vector<Payload> payloads;  // ascending user
  double duration = 0;
};

/// Data sent point-to-point: whole requests of users whose state has t = 0,
/// plus any chunks the multicast phase could not reach.
struct UnicastLeg {
  int user = 0;
  std::vector<ChunkRef> chunks;
  Rational volume{0};
  double time = 0;
};

struct DeliveryPlan {
  int t_hat = 0;
  std::vector<int> multicast_users;
  std::vector<Codeword> codewords;
  std::vector<UnicastLeg> unicast_legs;
  double total_time = 0;
};

DeliveryPlan build_delivery_plan(const CachePlacement& placement,
                                 const UserRealization& realization, const VectorXd& rates);

struct CertificationFailure {
  int user = -1;
  int codeword = -1;  // index into plan.codewords, -1 when not codeword-specific
  char check = '?';   // 'a'..'e'
  std::string message;
};

struct CertificationReport {
  std::vector<Rational> delivered;  // per user
  std::vector<Rational> cached;     // per user, of its own request
  std::vector<CertificationFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// Checks, per user: (a) no chunk arrives twice; (b) every chunk belongs to the
/// user's request and is absent from its cache; (c) delivered volume equals
/// 1 - t_i / K; (d) cached plus delivered volume is one file; and (e) each
/// codeword is decodable, i.e. every member caches the subfiles meant for the
/// other members.
CertificationReport certify_plan(const CachePlacement& placement,
                                 const UserRealization& realization, const DeliveryPlan& plan);

std::string format_chunk(const ChunkRef& c);

/// One line per codeword:
///   group=<i1,...> dur=<seconds> payload[i]=<state/u1.u2:q,...> ...
/// followed by `unicast user=<i> dur=<seconds> payload=<...>` lines and a
/// final `total_time=<seconds>` line. Indices are 1-based.
void write_plan_dump(std::ostream& os, const DeliveryPlan& plan);

void write_certification(std::ostream& os, const CertificationReport& report);

}  // namespace lcc
