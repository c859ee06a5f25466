#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "d2dsim/geometry.hpp"

namespace d2dsim {

enum class MessageKind {
  SIB,
  DiscoveryAnnounce,
  DiscoveryResponse,
  ContextForward,
  ServiceRequest,
  ResourceConfigDCI,
  ConfigExchange,
  DataStart,
};

enum class Party { Discoverer, Discoveree, Bs1, Bs2, Pair, Broadcast };

enum class RrcState { Idle, Connected };

std::string_view message_kind_name(MessageKind k);
std::string_view party_name(Party p);

/// Which context fields a message carries.
struct ContextPayload {
  int positions = 0;
  int velocities = 0;
  int gain_reports = 0;
  bool qos = false;
  bool priority = false;
  int resource_pools = 0;
  bool discovery_code = false;
  bool resource_grant = false;
  bool reconfigure_cellular = false;
};

/// Byte sizes used for overhead accounting. Only relative overhead between
/// schemes is meaningful.
struct MessageSizeTable {
  int header = 8;
  int position = 12;
  int velocity = 12;
  int gain_report = 4;
  int qos = 4;
  int priority = 1;
  int resource_pool = 16;
  int discovery_code = 23;
  int resource_grant = 8;
  int reconfigure_flag = 1;

  int size_of(const ContextPayload& p) const;
};

struct Message {
  MessageKind kind = MessageKind::SIB;
  Party sender = Party::Bs1;
  Party receiver = Party::Broadcast;
  ContextPayload payload;
  int bytes = 0;
  RrcState sender_rrc = RrcState::Idle;  // sender's RRC state when it was sent
  std::string note;
};

struct LocalAction {
  Party node = Party::Bs1;
  std::string label;
};

/// One numbered step of a procedure: the messages sent in it and the
/// node-local actions (RRM decisions, configuration) taken in it.
struct TraceStep {
  int index = 0;
  std::vector<LocalAction> actions;
  std::vector<Message> messages;
};

enum class Outcome { Configured, Rejected, Timeout };
std::string_view outcome_name(Outcome o);

struct ProtocolTrace {
  std::string scheme;  // "single-cell" or "multi-cell"
  std::vector<TraceStep> steps;
  Outcome outcome = Outcome::Rejected;

  std::size_t message_count() const;
  std::size_t count(MessageKind kind) const;
  bool contains(MessageKind kind) const { return count(kind) > 0; }
};

enum class Verdict { Accept, Reject };

/// What the two ends know about themselves when the procedure starts.
struct PairContext {
  Vec3 discoverer_position;
  Vec3 discoveree_position;
  Vec3 discoverer_velocity;
  Vec3 discoveree_velocity;
  double d2d_gain_db = 0.0;
  double discoverer_cell_gain_db = 0.0;
  double discoveree_cell_gain_db = 0.0;
  double qos_min_rate_bps = 0.0;
  int priority = 0;
  bool discoverer_covered = true;
  bool discoveree_covered = true;
  std::size_t sector_cellular_users = 0;  // known at the BS, never signalled
};

struct ProtocolOptions {
  char discovery_model = 'A';  // 'A': "I AM HERE", 'B': "WHO IS THERE?"
  int max_retries = 3;
  int lost_discoveries = 0;  // leading discovery attempts that go unanswered
  MessageSizeTable sizes;
};

/// Fixed context used for the checked-in reference traces.
PairContext reference_pair_context();

/// Procedure with both ends under one base station. With one end out of
/// coverage the covered end requests and forwards the grant.
/// Throws std::invalid_argument when neither end is covered.
ProtocolTrace run_single_cell(const PairContext& ctx, Verdict verdict, const ProtocolOptions& opts = {});

/// Procedure with the ends served by two base stations.
ProtocolTrace run_multi_cell(const PairContext& ctx, Verdict bs1, Verdict bs2, const ProtocolOptions& opts = {});

struct Overhead {
  std::size_t messages = 0;
  std::size_t bytes = 0;
  std::size_t gain_reports = 0;         // all gain reports in the trace
  std::size_t gain_reports_to_bs = 0;   // gain reports delivered to a base station
};

Overhead overhead(const ProtocolTrace& trace);

/// Gain reports a base station needs for full CSI over M cellular UEs and N pairs.
std::size_t full_csi_report_count(std::size_t cellular, std::size_t pairs);

/// Returns a description of every violated trace invariant; empty when clean.
std::vector<std::string> check_trace_invariants(const ProtocolTrace& trace);

/// Line-oriented export: "step sender receiver kind bytes" per message;
/// local actions appear as "step node node @action 0".
void write_trace(std::ostream& out, const ProtocolTrace& trace);
std::string trace_to_string(const ProtocolTrace& trace);

}  // namespace d2dsim
