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

#include "lunadtn/buffer.hpp"

#include <algorithm>

namespace lunadtn {

const Message* Buffer::find(std::uint32_t serial) const {
  if (!contains(serial)) return nullptr;
  for (const auto& e : entries_) {
    if (e.message.serial == serial) return &e.message;
  }
  return nullptr;
}

void Buffer::push(Message message, SimTime receiveTime) {
  if (message.size > free_space())
    throw ValidationError("message " + message.id + " does not fit in buffer");
  if (contains(message.serial))
    throw ValidationError("message " + message.id + " is already buffered");
  if (!entries_.empty() && receiveTime < entries_.back().receiveTime)
    throw ValidationError("buffer entries must arrive in time order");
  used_ += message.size;
  serials_.insert(message.serial);
  entries_.push_back({std::move(message), receiveTime});
}

std::optional<Message> Buffer::remove(std::uint32_t serial) {
  if (!contains(serial)) return std::nullopt;
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const BufferEntry& e) { return e.message.serial == serial; });
  Message m = std::move(it->message);
  entries_.erase(it);
  serials_.erase(serial);
  used_ -= m.size;
  return m;
}

Message Buffer::pop_oldest() {
  Message m = std::move(entries_.front().message);
  entries_.erase(entries_.begin());
  serials_.erase(m.serial);
  used_ -= m.size;
  return m;
}

RoomResult make_room(Buffer& buffer, ByteCount incomingSize) {
  RoomResult result;
  if (incomingSize > buffer.capacity()) return result;
  while (buffer.free_space() < incomingSize) result.dropped.push_back(buffer.pop_oldest());
  result.accepted = true;
  return result;
}

}  // namespace lunadtn
