#pragma once

#include <cstdint>
#include <variant>

#include "hiot/bytes.hpp"
#include "hiot/signcrypt.hpp"

namespace hiot {

constexpr uint8_t kWireVersion = 1;
constexpr size_t kMaxFrame = 64 * 1024;
constexpr size_t kMaxIdBytes = 1024;

// Opaque single-byte reject codes. Protocol-level rejections share one
// code so the wire leaks nothing about why a request failed.
constexpr uint8_t kRejectCodeProtocol = 0x01;
constexpr uint8_t kRejectCodeMalformed = 0x02;

enum class MsgType : uint8_t {
  RegUserReq = 1,
  RegUserResp = 2,
  RegSensorReq = 3,
  RegSensorResp = 4,
  DirectoryPush = 5,
  ServiceRequest = 6,
  MacConfirm = 7,
  Reject = 8,
};

// Bodies carry canonical encodings; the codec never interprets group
// elements, it only frames them at the widths the active backend publishes.

struct RegUserReqBody {
  Bytes user_id;
  Bytes user_pk;
  bool operator==(const RegUserReqBody&) const = default;
};

struct RegUserRespBody {
  Bytes acd;
  Bytes sig;
  Bytes delta;
  bool operator==(const RegUserRespBody&) const = default;
};

struct RegSensorReqBody {
  Bytes sensor_id;
  bool operator==(const RegSensorReqBody&) const = default;
};

struct RegSensorRespBody {
  Bytes partial_pub;
  Bytes partial_key;
  Bytes gamma;
  // Number of directory-push messages that follow this response.
  uint32_t directory_count = 0;
  bool operator==(const RegSensorRespBody&) const = default;
};

struct DirectoryPushBody {
  Bytes acd;
  Bytes sig;
  Bytes user_pk;
  Bytes delta;
  bool operator==(const DirectoryPushBody&) const = default;
};

struct ServiceRequestBody {
  Bytes masked_acd;   // R_2
  Bytes c;
  Bytes commit;       // R_1
  Bytes masked_msg;   // r_1
  Bytes masked_key;   // r_2
  Bytes locked_seed;  // U
  uint64_t timestamp_ms = 0;
  bool operator==(const ServiceRequestBody&) const = default;
};

struct MacConfirmBody {
  Bytes tag;
  bool operator==(const MacConfirmBody&) const = default;
};

struct RejectBody {
  uint8_t code = kRejectCodeProtocol;
  bool operator==(const RejectBody&) const = default;
};

using MessageBody =
    std::variant<RegUserReqBody, RegUserRespBody, RegSensorReqBody,
                 RegSensorRespBody, DirectoryPushBody, ServiceRequestBody,
                 MacConfirmBody, RejectBody>;

struct WireMessage {
  MessageBody body;
  MsgType type() const { return MsgType(uint8_t(body.index()) + 1); }
  bool operator==(const WireMessage&) const = default;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&body);
  }
};

enum class DecodeError : uint8_t {
  MalformedLength,
  MalformedTag,
  MalformedVersion,
};

const char* decode_error_name(DecodeError e);

// Field widths are fixed per backend and published in the system
// parameters; see docs/wire.md for the byte-exact layout.
class WireCodec {
 public:
  WireCodec(size_t g1_len, size_t scalar_len, size_t payload_len);
  static WireCodec for_params(const SystemParams& params);

  Bytes encode(const WireMessage& msg) const;
  std::variant<WireMessage, DecodeError> decode(
      std::span<const uint8_t> bytes) const;

  size_t g1_len() const { return g1_len_; }
  size_t scalar_len() const { return scalar_len_; }
  size_t payload_len() const { return payload_len_; }

  // Analytic sizes: header + sum of fixed field widths.
  size_t service_request_size() const {
    return 2 + 3 * g1_len_ + scalar_len_ + 2 * payload_len_ + 8;
  }
  size_t mac_confirm_size() const { return 2 + kMacTagBytes; }

 private:
  size_t g1_len_, scalar_len_, payload_len_;
};

}  // namespace hiot
