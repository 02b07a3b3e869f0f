// Copyright 2026 The Ogmios Authors.
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

#pragma once

// Frame layout (all integers big-endian):
//
//   offset  size  field
//   0       4     magic "OGMW"
//   4       1     version, currently 1
//   5       1     message type: 1 HELLO, 2 DISPATCH, 3 RESULT, 4 ACK
//   6       4     header length H
//   10      4     payload length P
//   14      H     header: UTF-8 "key=value\n" lines sorted by key
//   14+H    P     payload, opaque bytes
//
// See docs/wire-protocol.md for the header fields of each message.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ogmios/errors.hpp"

namespace ogmios::distribution {

enum class MessageType : std::uint8_t { hello = 1, dispatch = 2, result = 3, ack = 4 };

inline constexpr std::string_view kMagic = "OGMW";
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 14;
inline constexpr std::uint32_t kMaxHeaderBytes = 64 * 1024;
inline constexpr std::uint32_t kMaxPayloadBytes = 512u * 1024 * 1024;

struct Message {
  MessageType type = MessageType::ack;
  std::map<std::string, std::string> header;
  std::string payload;

  bool operator==(const Message&) const = default;

  const std::string* get(std::string_view key) const {
    const auto it = header.find(std::string(key));
    return it == header.end() ? nullptr : &it->second;
  }

  const std::string& require(std::string_view key) const {
    const std::string* v = get(key);
    if (!v) throw ProtocolError("message is missing header field '" + std::string(key) + "'");
    return *v;
  }

  std::uint64_t require_number(std::string_view key) const {
    const std::string& v = require(key);
    if (v.empty() || v.size() > 19 || v.find_first_not_of("0123456789") != std::string::npos) {
      throw ProtocolError("header field '" + std::string(key) + "' is not a number: '" + v + "'");
    }
    return std::stoull(v);
  }
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t at) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(in[at])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + 1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + 2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + 3]));
}

inline bool valid_key(std::string_view key) {
  return !key.empty() && key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_") == std::string_view::npos;
}

}  // namespace detail

inline std::string encode(const Message& m) {
  std::string header;
  for (const auto& [k, v] : m.header) {
    if (!detail::valid_key(k)) throw ProtocolError("invalid header key '" + k + "'");
    if (v.find('\n') != std::string::npos) throw ProtocolError("header value for '" + k + "' contains a newline");
    header += k;
    header += '=';
    header += v;
    header += '\n';
  }
  if (header.size() > kMaxHeaderBytes) throw ProtocolError("header too large");
  if (m.payload.size() > kMaxPayloadBytes) throw ProtocolError("payload too large");
  std::string out;
  out.reserve(kFrameHeaderSize + header.size() + m.payload.size());
  out += kMagic;
  out.push_back(static_cast<char>(kProtocolVersion));
  out.push_back(static_cast<char>(m.type));
  detail::put_u32(out, static_cast<std::uint32_t>(header.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(m.payload.size()));
  out += header;
  out += m.payload;
  return out;
}

// Lengths announced by a frame's fixed prefix.
struct FrameLengths {
  MessageType type;
  std::uint32_t header;
  std::uint32_t payload;
};

inline FrameLengths decode_prefix(std::string_view prefix) {
  if (prefix.size() < kFrameHeaderSize) throw ProtocolError("truncated frame prefix");
  if (prefix.substr(0, 4) != kMagic) throw ProtocolError("bad magic");
  if (static_cast<std::uint8_t>(prefix[4]) != kProtocolVersion) throw ProtocolError("unsupported protocol version");
  const auto type = static_cast<std::uint8_t>(prefix[5]);
  if (type < 1 || type > 4) throw ProtocolError("unknown message type " + std::to_string(type));
  FrameLengths f{static_cast<MessageType>(type), detail::get_u32(prefix, 6), detail::get_u32(prefix, 10)};
  if (f.header > kMaxHeaderBytes) throw ProtocolError("header too large");
  if (f.payload > kMaxPayloadBytes) throw ProtocolError("payload too large");
  return f;
}

inline Message decode_body(const FrameLengths& f, std::string_view header, std::string payload) {
  Message m;
  m.type = f.type;
  std::size_t begin = 0;
  while (begin < header.size()) {
    const auto end = header.find('\n', begin);
    if (end == std::string_view::npos) throw ProtocolError("unterminated header line");
    const auto line = header.substr(begin, end - begin);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ProtocolError("header line without '='");
    const std::string key(line.substr(0, eq));
    if (!detail::valid_key(key)) throw ProtocolError("invalid header key '" + key + "'");
    if (!m.header.emplace(key, std::string(line.substr(eq + 1))).second) {
      throw ProtocolError("duplicate header key '" + key + "'");
    }
    begin = end + 1;
  }
  m.payload = std::move(payload);
  return m;
}

// Decodes exactly one complete frame.
inline Message decode(std::string_view frame) {
  const FrameLengths f = decode_prefix(frame);
  const std::size_t total = kFrameHeaderSize + f.header + f.payload;
  if (frame.size() != total) {
    throw ProtocolError("frame length " + std::to_string(frame.size()) + " does not match announced " +
                        std::to_string(total));
  }
  return decode_body(f, frame.substr(kFrameHeaderSize, f.header),
                     std::string(frame.substr(kFrameHeaderSize + f.header)));
}

// Reads one message from any reliable byte stream. `read_exact(buf, n)`
// must fill n bytes or throw; returning false signals a clean end of stream
// before the first byte of a frame.
template <typename ReadExact>
std::optional<Message> read_message(ReadExact&& read_exact) {
  std::string prefix(kFrameHeaderSize, '\0');
  if (!read_exact(prefix.data(), prefix.size())) return std::nullopt;
  const FrameLengths f = decode_prefix(prefix);
  std::string header(f.header, '\0');
  if (f.header && !read_exact(header.data(), header.size())) throw ProtocolError("stream ended inside a frame");
  std::string payload(f.payload, '\0');
  if (f.payload && !read_exact(payload.data(), payload.size())) throw ProtocolError("stream ended inside a frame");
  return decode_body(f, header, std::move(payload));
}

}  // namespace ogmios::distribution
