// Copyright 2026 The lunadtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LUNADTN_BUFFER_HPP
#define LUNADTN_BUFFER_HPP

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "lunadtn/core.hpp"

namespace lunadtn {

struct BufferEntry {
  Message message;
  SimTime receiveTime = 0.0;
};

/// Bounded message store ordered by receive time (oldest first).
class Buffer {
 public:
  explicit Buffer(ByteCount capacity) : capacity_(capacity) {}

  ByteCount capacity() const { return capacity_; }
  ByteCount used() const { return used_; }
  ByteCount free_space() const { return capacity_ - used_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<BufferEntry>& entries() const { return entries_; }

  bool contains(std::uint32_t serial) const { return serials_.contains(serial); }
  const Message* find(std::uint32_t serial) const;

  /// Appends an entry. Throws ValidationError if it does not fit, if it is
  /// already stored, or if receiveTime precedes the newest entry.
  void push(Message message, SimTime receiveTime);

  std::optional<Message> remove(std::uint32_t serial);
  Message pop_oldest();

 private:
  ByteCount capacity_;
  ByteCount used_ = 0;
  std::vector<BufferEntry> entries_;
  std::unordered_set<std::uint32_t> serials_;
};

struct RoomResult {
  bool accepted = false;
  std::vector<Message> dropped;  // in drop order
};

/// Evicts oldest-received entries until `incomingSize` bytes are free.
/// Refuses without evicting anything when the message can never fit.
RoomResult make_room(Buffer& buffer, ByteCount incomingSize);

/// Everything a node keeps about messages: its buffer plus the set of
/// messages already delivered to it as final recipient.
struct MessageStore {
  Buffer buffer;
  std::unordered_set<std::uint32_t> delivered;

  explicit MessageStore(ByteCount capacity) : buffer(capacity) {}

  bool holds(std::uint32_t serial) const {
    return buffer.contains(serial) || delivered.contains(serial);
  }
};

}  // namespace lunadtn

#endif  // LUNADTN_BUFFER_HPP
