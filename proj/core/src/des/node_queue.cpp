#include "ntn/des/node_queue.hpp"

#include <stdexcept>
#include <string>

namespace ntn::des {
namespace {

constexpr std::string_view kDefaultOrder =
    "inter-satellite|core-notify,core-response,attach-request,ga-request,"
    "config-delivery|notification-broadcast,ue-request|ue-retransmission|share-broadcast";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

PriorityOrder PriorityOrder::defaults() { return parse(kDefaultOrder); }

PriorityOrder PriorityOrder::parse(std::string_view spec) {
  PriorityOrder order;
  std::array<bool, kMessageClassCount> seen{};
  std::uint8_t rank = 0;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    std::string_view level = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    bool any = false;
    while (!level.empty()) {
      const auto bar = level.find('|');
      const std::string_view name = trim(level.substr(0, bar));
      level = bar == std::string_view::npos ? std::string_view{} : level.substr(bar + 1);
      if (name.empty()) continue;
      const auto cls = parse_message_class(name);
      if (!cls) throw std::invalid_argument("unknown message class in priority order: " + std::string(name));
      const auto idx = static_cast<std::size_t>(*cls);
      if (seen[idx]) throw std::invalid_argument("message class listed twice: " + std::string(name));
      seen[idx] = true;
      order.ranks_[idx] = rank;
      any = true;
    }
    if (any) ++rank;
  }
  for (std::size_t i = 0; i < kMessageClassCount; ++i) {
    if (!seen[i]) order.ranks_[i] = rank;
  }
  order.levels_ = static_cast<std::size_t>(rank) + 1;
  return order;
}

NodeQueue::NodeQueue(std::size_t capacity, std::size_t processors, PriorityOrder order)
    : capacity_(capacity), processors_(processors), order_(order), levels_(order.levels()) {
  if (processors_ == 0) throw std::invalid_argument("a node needs at least one processor");
}

NodeQueue::Admitted NodeQueue::enqueue(Message msg, SimTime now) {
  ++received_;
  if (busy_ < processors_ && queued_ == 0) {
    ++busy_;
    msg.enqueued_at = now;
    msg.service_start_at = now;
    return {Admission::Serve, std::move(msg)};
  }
  if (queued_ >= capacity_) {
    ++dropped_;
    return {Admission::Dropped, std::nullopt};
  }
  msg.enqueued_at = now;
  levels_[order_.rank(msg.cls)].push_back(std::move(msg));
  ++queued_;
  if (queued_ > max_queued_) max_queued_ = queued_;
  return {Admission::Queued, std::nullopt};
}

std::optional<Message> NodeQueue::complete(SimTime now) {
  if (busy_ == 0) throw std::logic_error("NodeQueue::complete with no message in service");
  ++serviced_;
  for (auto& level : levels_) {
    if (level.empty()) continue;
    Message next = std::move(level.front());
    level.pop_front();
    --queued_;
    next.service_start_at = now;
    return next;
  }
  --busy_;
  return std::nullopt;
}

bool NodeQueue::conserved() const {
  return received_ == dropped_ + serviced_ + queued_ + busy_;
}

std::optional<std::uint8_t> NodeQueue::best_waiting_rank() const {
  for (std::size_t r = 0; r < levels_.size(); ++r) {
    if (!levels_[r].empty()) return static_cast<std::uint8_t>(r);
  }
  return std::nullopt;
}

}  // namespace ntn::des
