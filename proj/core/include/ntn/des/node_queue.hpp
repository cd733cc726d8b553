#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "ntn/des/message.hpp"

namespace ntn::des {

/// Service rank per message class; rank 0 is served first.
class PriorityOrder {
 public:
  /// inter-satellite (and core-notify), core-response, attach-request,
  /// ga-request, config-delivery (and internal jobs), then UE requests.
  static PriorityOrder defaults();

  /// Parses "a|b,c,d|e": comma separates ranks (highest first), '|' joins
  /// classes of equal rank. Unlisted classes rank below every listed one.
  /// Throws std::invalid_argument on unknown class names.
  static PriorityOrder parse(std::string_view spec);

  std::uint8_t rank(MessageClass c) const { return ranks_[static_cast<std::size_t>(c)]; }
  std::size_t levels() const { return levels_; }

 private:
  std::array<std::uint8_t, kMessageClassCount> ranks_{};
  std::size_t levels_ = 0;
};

enum class Admission { Serve, Queued, Dropped };

/// Bounded priority queue in front of a fixed pool of identical processors.
///
/// Messages are served by priority rank, then arrival order. A message that
/// finds every processor busy and the waiting room full is dropped; nothing
/// already queued is ever evicted.
class NodeQueue {
 public:
  NodeQueue(std::size_t capacity, std::size_t processors,
            PriorityOrder order = PriorityOrder::defaults());

  struct Admitted {
    Admission outcome;
    /// Set only for Admission::Serve: the message, now in service.
    std::optional<Message> serve;
  };

  Admitted enqueue(Message msg, SimTime now);

  /// A processor finished its message. Returns the next message to serve on
  /// that processor, or nullopt if it goes idle.
  std::optional<Message> complete(SimTime now);

  std::size_t capacity() const { return capacity_; }
  std::size_t processors() const { return processors_; }
  std::size_t queued() const { return queued_; }
  std::size_t in_service() const { return busy_; }
  std::size_t max_queued() const { return max_queued_; }
  std::uint64_t received() const { return received_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t serviced() const { return serviced_; }

  /// received == dropped + serviced + queued + in_service
  bool conserved() const;

  /// Rank of the best message currently waiting, if any.
  std::optional<std::uint8_t> best_waiting_rank() const;

 private:
  std::size_t capacity_;
  std::size_t processors_;
  PriorityOrder order_;
  std::vector<std::deque<Message>> levels_;
  std::size_t queued_ = 0;
  std::size_t busy_ = 0;
  std::size_t max_queued_ = 0;
  std::uint64_t received_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t serviced_ = 0;
};

}  // namespace ntn::des
