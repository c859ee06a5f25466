#include "d2dsim/signaling.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace d2dsim {

std::string_view message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::SIB: return "SIB";
    case MessageKind::DiscoveryAnnounce: return "DiscoveryAnnounce";
    case MessageKind::DiscoveryResponse: return "DiscoveryResponse";
    case MessageKind::ContextForward: return "ContextForward";
    case MessageKind::ServiceRequest: return "ServiceRequest";
    case MessageKind::ResourceConfigDCI: return "ResourceConfigDCI";
    case MessageKind::ConfigExchange: return "ConfigExchange";
    case MessageKind::DataStart: return "DataStart";
  }
  return "?";
}

std::string_view party_name(Party p) {
  switch (p) {
    case Party::Discoverer: return "discoverer";
    case Party::Discoveree: return "discoveree";
    case Party::Bs1: return "bs1";
    case Party::Bs2: return "bs2";
    case Party::Pair: return "pair";
    case Party::Broadcast: return "broadcast";
  }
  return "?";
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Configured: return "configured";
    case Outcome::Rejected: return "rejected";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

int MessageSizeTable::size_of(const ContextPayload& p) const {
  return header + p.positions * position + p.velocities * velocity + p.gain_reports * gain_report +
         (p.qos ? qos : 0) + (p.priority ? priority : 0) + p.resource_pools * resource_pool +
         (p.discovery_code ? discovery_code : 0) + (p.resource_grant ? resource_grant : 0) +
         (p.reconfigure_cellular ? reconfigure_flag : 0);
}

std::size_t ProtocolTrace::message_count() const {
  std::size_t k = 0;
  for (const auto& s : steps) k += s.messages.size();
  return k;
}

std::size_t ProtocolTrace::count(MessageKind kind) const {
  std::size_t k = 0;
  for (const auto& s : steps)
    for (const auto& m : s.messages) k += m.kind == kind;
  return k;
}

namespace {

// Logical-time event queue; ties run in scheduling order.
class EventQueue {
 public:
  void schedule(int delay, std::function<void()> fn) {
    events_.emplace(std::make_pair(now_ + delay, seq_++), std::move(fn));
  }
  void run() {
    while (!events_.empty()) {
      auto it = events_.begin();
      now_ = it->first.first;
      auto fn = std::move(it->second);
      events_.erase(it);
      fn();
    }
  }

 private:
  std::map<std::pair<int, std::uint64_t>, std::function<void()>> events_;
  int now_ = 0;
  std::uint64_t seq_ = 0;
};

struct NodeState {
  RrcState rrc = RrcState::Idle;
  bool covered = true;
  bool has_sib = false;
  bool has_peer_context = false;
  bool granted = false;
  bool peer_config = false;
  bool configured = false;
};

constexpr int kDiscoveryTimeout = 3;

class Procedure {
 public:
  Procedure(const PairContext& ctx, const ProtocolOptions& opts, bool multi, Verdict v1, Verdict v2)
      : ctx_(ctx), opts_(opts), multi_(multi), verdict1_(v1), verdict2_(v2), lost_left_(opts.lost_discoveries) {
    trace_.scheme = multi ? "multi-cell" : "single-cell";
    discoverer_.covered = ctx.discoverer_covered;
    discoveree_.covered = ctx.discoveree_covered;
  }

  ProtocolTrace run() {
    const int pools = multi_ ? 2 : 1;  // serving pool, plus the neighbour's in multi-cell SIBs
    send(1, make(MessageKind::SIB, Party::Bs1, Party::Broadcast, {.resource_pools = pools}));
    if (multi_) send(1, make(MessageKind::SIB, Party::Bs2, Party::Broadcast, {.resource_pools = pools}));
    queue_.schedule(1, [this] { announce(); });
    queue_.run();
    return std::move(trace_);
  }

 private:
  NodeState& node(Party p) {
    switch (p) {
      case Party::Discoverer: return discoverer_;
      case Party::Discoveree: return discoveree_;
      case Party::Bs2: return bs2_;
      default: return bs1_;
    }
  }

  static Message make(MessageKind kind, Party from, Party to, ContextPayload payload) {
    Message m;
    m.kind = kind;
    m.sender = from;
    m.receiver = to;
    m.payload = payload;
    return m;
  }

  TraceStep& step(int index) {
    if (!trace_.steps.empty()) {
      TraceStep& last = trace_.steps.back();
      if (last.index == index) return last;
      if (last.index > index) throw std::logic_error("signaling step emitted out of order");
    }
    trace_.steps.push_back({index, {}, {}});
    return trace_.steps.back();
  }

  void act(int index, Party who, std::string label) { step(index).actions.push_back({who, std::move(label)}); }

  void send(int index, Message m) {
    m.bytes = opts_.sizes.size_of(m.payload);
    m.sender_rrc = node(m.sender).rrc;
    step(index).messages.push_back(m);
    queue_.schedule(1, [this, m] { deliver(m); });
  }

  Party requester() const {
    if (multi_ || ctx_.discoverer_covered) return Party::Discoverer;
    return Party::Discoveree;
  }
  Party peer(Party p) const { return p == Party::Discoverer ? Party::Discoveree : Party::Discoverer; }

  ContextPayload full_context(int covered_ends) const {
    return {.positions = 2, .velocities = 2, .gain_reports = 1 + covered_ends, .qos = true, .priority = true};
  }

  void announce() {
    ++attempts_;
    ContextPayload p{.discovery_code = true};
    if (!multi_ && !ctx_.discoverer_covered) {
      // The covered discoveree will file the request and needs the discoverer's context.
      p.positions = 1;
      p.velocities = 1;
    }
    Message m = make(MessageKind::DiscoveryAnnounce, Party::Discoverer, Party::Discoveree, p);
    m.note = opts_.discovery_model == 'B' ? "WHO IS THERE?" : "I AM HERE";
    send(2, m);
    const int attempt = attempts_;
    queue_.schedule(kDiscoveryTimeout, [this, attempt] { discovery_timeout(attempt); });
  }

  void discovery_timeout(int attempt) {
    if (response_seen_ || attempt != attempts_ || finished_) return;
    if (attempts_ <= opts_.max_retries) {
      announce();
      return;
    }
    finish(Outcome::Timeout);
  }

  void finish(Outcome o) {
    trace_.outcome = o;
    finished_ = true;
  }

  void deliver(const Message& m) {
    if (finished_) return;
    switch (m.kind) {
      case MessageKind::SIB:
        if (m.sender == Party::Bs1 || !multi_) {
          if (discoverer_.covered) discoverer_.has_sib = true;
          if (!multi_ && discoveree_.covered) discoveree_.has_sib = true;
        } else {
          discoveree_.has_sib = true;
        }
        break;
      case MessageKind::DiscoveryAnnounce:
        on_announce();
        break;
      case MessageKind::DiscoveryResponse:
        on_response();
        break;
      case MessageKind::ContextForward:
        discoveree_.has_peer_context = true;
        service_request(Party::Discoveree, Party::Bs2, 5);
        break;
      case MessageKind::ServiceRequest:
        on_service_request(m.receiver);
        break;
      case MessageKind::ResourceConfigDCI:
        on_dci(m.receiver);
        break;
      case MessageKind::ConfigExchange:
        on_config_exchange(m.receiver);
        break;
      case MessageKind::DataStart:
        break;
    }
  }

  void on_announce() {
    if (lost_left_ > 0) {
      --lost_left_;
      return;
    }
    if (responded_) return;
    responded_ = true;
    discoveree_.has_peer_context = !multi_ && !ctx_.discoverer_covered;
    const int own_cell_gain = discoveree_.covered ? 1 : 0;
    send(3, make(MessageKind::DiscoveryResponse, Party::Discoveree, Party::Discoverer,
                 {.positions = 1, .velocities = 1, .gain_reports = 1 + own_cell_gain, .discovery_code = true}));
    if (requester() == Party::Discoveree) {
      queue_.schedule(1, [this] { service_request(Party::Discoveree, Party::Bs1, 4); });
    }
  }

  void on_response() {
    if (response_seen_) return;
    response_seen_ = true;
    discoverer_.has_peer_context = true;
    if (multi_) {
      queue_.schedule(1, [this] { service_request(Party::Discoverer, Party::Bs1, 5); });
      send(4, make(MessageKind::ContextForward, Party::Discoverer, Party::Discoveree,
                   {.positions = 1, .velocities = 1, .gain_reports = 2}));
    } else if (requester() == Party::Discoverer) {
      service_request(Party::Discoverer, Party::Bs1, 4);
    }
  }

  void service_request(Party from, Party bs, int index) {
    node(from).rrc = RrcState::Connected;
    const int covered = (discoverer_.covered ? 1 : 0) + (discoveree_.covered ? 1 : 0);
    send(index, make(MessageKind::ServiceRequest, from, bs, full_context(covered)));
  }

  void on_service_request(Party bs) {
    NodeState& st = node(bs);
    st.has_peer_context = true;
    const bool accept = (bs == Party::Bs2 ? verdict2_ : verdict1_) == Verdict::Accept;
    const int rrm_step = multi_ ? 6 : 5;
    act(rrm_step, bs, accept ? "rrm-accept" : "rrm-reject");
    if (!multi_) {
      if (!accept) {
        finish(Outcome::Rejected);
        return;
      }
      grant(Party::Bs1, ctx_.discoverer_covered && ctx_.discoveree_covered ? Party::Pair : requester(), 6);
      return;
    }
    ++decisions_;
    if (!accept) rejected_ = true;
    pending_grants_.push_back({bs, accept});
    if (decisions_ < 2) return;
    for (const auto& [who, ok] : pending_grants_) {
      if (ok) grant(who, who == Party::Bs1 ? Party::Discoverer : Party::Discoveree, 7);
    }
    if (rejected_) finish(Outcome::Rejected);
  }

  void grant(Party bs, Party to, int index) {
    send(index, make(MessageKind::ResourceConfigDCI, bs, to, {.resource_grant = true, .reconfigure_cellular = true}));
  }

  void configure(Party who, int index) {
    node(who).configured = true;
    act(index, who, "configure");
  }

  void on_dci(Party to) {
    if (!multi_) {
      if (to == Party::Pair) {
        discoverer_.granted = discoveree_.granted = true;
        configure(Party::Discoverer, 7);
        configure(Party::Discoveree, 7);
        queue_.schedule(1, [this] { data_start(Party::Discoverer, 8); });
        return;
      }
      // Covered end relays the grant to the end without coverage.
      node(to).granted = true;
      send(6, make(MessageKind::ConfigExchange, to, peer(to), {.resource_grant = true}));
      configure(to, 7);
      return;
    }
    node(to).granted = true;
    send(8, make(MessageKind::ConfigExchange, to, peer(to), {.resource_grant = true}));
  }

  void on_config_exchange(Party to) {
    NodeState& st = node(to);
    st.peer_config = true;
    if (!multi_) {
      st.granted = true;
      configure(to, 7);
      queue_.schedule(1, [this] { data_start(Party::Discoverer, 8); });
      return;
    }
    if (st.granted) {
      configure(to, 9);
      queue_.schedule(1, [this, to] { data_start(to, 10); });
    }
  }

  void data_start(Party from, int index) {
    if (finished_) return;
    send(index, make(MessageKind::DataStart, from, peer(from), {}));
    if (++data_starts_ == (multi_ ? 2 : 1)) finish(Outcome::Configured);
  }

  const PairContext& ctx_;
  const ProtocolOptions& opts_;
  bool multi_;
  Verdict verdict1_;
  Verdict verdict2_;
  int lost_left_;

  EventQueue queue_;
  ProtocolTrace trace_;
  NodeState discoverer_, discoveree_, bs1_, bs2_;
  int attempts_ = 0;
  bool responded_ = false;
  bool response_seen_ = false;
  bool finished_ = false;
  bool rejected_ = false;
  int decisions_ = 0;
  int data_starts_ = 0;
  std::vector<std::pair<Party, bool>> pending_grants_;
};

}  // namespace

ProtocolTrace run_single_cell(const PairContext& ctx, Verdict verdict, const ProtocolOptions& opts) {
  if (!ctx.discoverer_covered && !ctx.discoveree_covered) {
    throw std::invalid_argument("run_single_cell: at least one end needs cellular coverage");
  }
  return Procedure(ctx, opts, false, verdict, Verdict::Accept).run();
}

ProtocolTrace run_multi_cell(const PairContext& ctx, Verdict bs1, Verdict bs2, const ProtocolOptions& opts) {
  PairContext covered = ctx;
  covered.discoverer_covered = covered.discoveree_covered = true;
  return Procedure(covered, opts, true, bs1, bs2).run();
}

Overhead overhead(const ProtocolTrace& trace) {
  Overhead o;
  for (const auto& s : trace.steps) {
    for (const auto& m : s.messages) {
      ++o.messages;
      o.bytes += static_cast<std::size_t>(m.bytes);
      o.gain_reports += static_cast<std::size_t>(m.payload.gain_reports);
      if (m.receiver == Party::Bs1 || m.receiver == Party::Bs2) {
        o.gain_reports_to_bs += static_cast<std::size_t>(m.payload.gain_reports);
      }
    }
  }
  return o;
}

std::size_t full_csi_report_count(std::size_t cellular, std::size_t pairs) {
  return cellular * pairs + cellular + 2 * pairs;
}

std::vector<std::string> check_trace_invariants(const ProtocolTrace& trace) {
  std::vector<std::string> errors;
  int last_index = 0;
  bool seen_response = false;
  bool seen_dci = false;
  bool seen_data = false;
  for (const auto& s : trace.steps) {
    if (s.index <= last_index) errors.push_back("step " + std::to_string(s.index) + " does not increase");
    last_index = s.index;
    for (const auto& m : s.messages) {
      switch (m.kind) {
        case MessageKind::DiscoveryAnnounce:
        case MessageKind::DiscoveryResponse:
          if (m.sender_rrc != RrcState::Idle) errors.emplace_back("discovery sent in RRC connected state");
          if (m.kind == MessageKind::DiscoveryResponse) seen_response = true;
          break;
        case MessageKind::ServiceRequest:
          if (!seen_response) errors.emplace_back("ServiceRequest before DiscoveryResponse");
          if (m.sender_rrc != RrcState::Connected) errors.emplace_back("ServiceRequest sent while RRC idle");
          break;
        case MessageKind::ResourceConfigDCI:
          seen_dci = true;
          break;
        case MessageKind::DataStart:
          if (!seen_dci) errors.emplace_back("DataStart before ResourceConfigDCI");
          seen_data = true;
          break;
        default:
          break;
      }
    }
  }
  if (seen_data != (trace.outcome == Outcome::Configured)) {
    errors.emplace_back("DataStart presence disagrees with outcome");
  }
  return errors;
}

void write_trace(std::ostream& out, const ProtocolTrace& trace) {
  out << "# " << trace.scheme << '\n';
  for (const auto& s : trace.steps) {
    for (const auto& m : s.messages) {
      out << s.index << ' ' << party_name(m.sender) << ' ' << party_name(m.receiver) << ' '
          << message_kind_name(m.kind) << ' ' << m.bytes << '\n';
    }
    for (const auto& a : s.actions) {
      out << s.index << ' ' << party_name(a.node) << ' ' << party_name(a.node) << " @" << a.label << " 0\n";
    }
  }
  const Overhead o = overhead(trace);
  out << "# outcome " << outcome_name(trace.outcome) << '\n';
  out << "# steps " << trace.steps.size() << " messages " << o.messages << " bytes " << o.bytes << '\n';
}

std::string trace_to_string(const ProtocolTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

PairContext reference_pair_context() {
  PairContext ctx;
  ctx.discoverer_position = {150.0, 300.0, 1.5};
  ctx.discoveree_position = {172.0, 311.0, 1.5};
  ctx.discoverer_velocity = {1.0, 0.0, 0.0};
  ctx.discoveree_velocity = {0.0, -1.2, 0.0};
  ctx.d2d_gain_db = -82.0;
  ctx.discoverer_cell_gain_db = -96.5;
  ctx.discoveree_cell_gain_db = -99.0;
  ctx.qos_min_rate_bps = 1e6;
  ctx.priority = 1;
  ctx.sector_cellular_users = 20;
  return ctx;
}

}  // namespace d2dsim
