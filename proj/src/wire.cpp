#include "hiot/wire.hpp"

namespace hiot {

namespace {

// Cursor-style reader; every getter fails closed on short input.
struct Reader {
  std::span<const uint8_t> buf;
  size_t pos = 0;
  bool ok = true;

  bool take(size_t n, std::span<const uint8_t>& out) {
    if (!ok || buf.size() - pos < n) {
      ok = false;
      return false;
    }
    out = buf.subspan(pos, n);
    pos += n;
    return true;
  }
  Bytes fixed(size_t n) {
    std::span<const uint8_t> s;
    if (!take(n, s)) return {};
    return Bytes(s.begin(), s.end());
  }
  uint8_t u8() {
    std::span<const uint8_t> s;
    if (!take(1, s)) return 0;
    return s[0];
  }
  uint32_t u32() {
    std::span<const uint8_t> s;
    if (!take(4, s)) return 0;
    return get_u32_be(s.data());
  }
  uint64_t u64() {
    std::span<const uint8_t> s;
    if (!take(8, s)) return 0;
    return get_u64_be(s.data());
  }
  Bytes lp(size_t max_len) {
    uint32_t n = u32();
    if (!ok || n > max_len) {
      ok = false;
      return {};
    }
    return fixed(n);
  }
  bool done() const { return ok && pos == buf.size(); }
};

void put_fixed(Bytes& out, const Bytes& field, size_t width) {
  if (field.size() != width)
    throw std::invalid_argument("wire field width mismatch");
  append(out, field);
}

}  // namespace

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::MalformedLength: return "malformed-length";
    case DecodeError::MalformedTag: return "malformed-tag";
    case DecodeError::MalformedVersion: return "malformed-version";
  }
  return "?";
}

WireCodec::WireCodec(size_t g1_len, size_t scalar_len, size_t payload_len)
    : g1_len_(g1_len), scalar_len_(scalar_len), payload_len_(payload_len) {}

WireCodec WireCodec::for_params(const SystemParams& params) {
  return WireCodec(params.backend->g1_size(), params.backend->scalar_size(),
                   params.payload_bytes());
}

Bytes WireCodec::encode(const WireMessage& msg) const {
  Bytes out;
  out.push_back(kWireVersion);
  out.push_back(uint8_t(msg.type()));
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, RegUserReqBody>) {
          put_lp(out, body.user_id);
          put_fixed(out, body.user_pk, g1_len_);
        } else if constexpr (std::is_same_v<T, RegUserRespBody>) {
          put_fixed(out, body.acd, g1_len_);
          put_fixed(out, body.sig, scalar_len_);
          put_fixed(out, body.delta, scalar_len_);
        } else if constexpr (std::is_same_v<T, RegSensorReqBody>) {
          put_lp(out, body.sensor_id);
        } else if constexpr (std::is_same_v<T, RegSensorRespBody>) {
          put_fixed(out, body.partial_pub, g1_len_);
          put_fixed(out, body.partial_key, scalar_len_);
          put_fixed(out, body.gamma, scalar_len_);
          put_u32_be(out, body.directory_count);
        } else if constexpr (std::is_same_v<T, DirectoryPushBody>) {
          put_fixed(out, body.acd, g1_len_);
          put_fixed(out, body.sig, scalar_len_);
          put_fixed(out, body.user_pk, g1_len_);
          put_fixed(out, body.delta, scalar_len_);
        } else if constexpr (std::is_same_v<T, ServiceRequestBody>) {
          put_fixed(out, body.masked_acd, g1_len_);
          put_fixed(out, body.c, scalar_len_);
          put_fixed(out, body.commit, g1_len_);
          put_fixed(out, body.masked_msg, payload_len_);
          put_fixed(out, body.masked_key, payload_len_);
          put_fixed(out, body.locked_seed, g1_len_);
          put_u64_be(out, body.timestamp_ms);
        } else if constexpr (std::is_same_v<T, MacConfirmBody>) {
          put_fixed(out, body.tag, kMacTagBytes);
        } else if constexpr (std::is_same_v<T, RejectBody>) {
          out.push_back(body.code);
        }
      },
      msg.body);
  return out;
}

std::variant<WireMessage, DecodeError> WireCodec::decode(
    std::span<const uint8_t> bytes) const {
  if (bytes.size() < 2) return DecodeError::MalformedLength;
  if (bytes.size() > kMaxFrame) return DecodeError::MalformedLength;
  if (bytes[0] != kWireVersion) return DecodeError::MalformedVersion;
  uint8_t tag = bytes[1];
  if (tag < 1 || tag > 8) return DecodeError::MalformedTag;

  Reader r{bytes.subspan(2)};
  WireMessage msg;
  switch (MsgType(tag)) {
    case MsgType::RegUserReq: {
      RegUserReqBody b;
      b.user_id = r.lp(kMaxIdBytes);
      b.user_pk = r.fixed(g1_len_);
      msg.body = std::move(b);
      break;
    }
    case MsgType::RegUserResp: {
      RegUserRespBody b;
      b.acd = r.fixed(g1_len_);
      b.sig = r.fixed(scalar_len_);
      b.delta = r.fixed(scalar_len_);
      msg.body = std::move(b);
      break;
    }
    case MsgType::RegSensorReq: {
      RegSensorReqBody b;
      b.sensor_id = r.lp(kMaxIdBytes);
      msg.body = std::move(b);
      break;
    }
    case MsgType::RegSensorResp: {
      RegSensorRespBody b;
      b.partial_pub = r.fixed(g1_len_);
      b.partial_key = r.fixed(scalar_len_);
      b.gamma = r.fixed(scalar_len_);
      b.directory_count = r.u32();
      msg.body = std::move(b);
      break;
    }
    case MsgType::DirectoryPush: {
      DirectoryPushBody b;
      b.acd = r.fixed(g1_len_);
      b.sig = r.fixed(scalar_len_);
      b.user_pk = r.fixed(g1_len_);
      b.delta = r.fixed(scalar_len_);
      msg.body = std::move(b);
      break;
    }
    case MsgType::ServiceRequest: {
      ServiceRequestBody b;
      b.masked_acd = r.fixed(g1_len_);
      b.c = r.fixed(scalar_len_);
      b.commit = r.fixed(g1_len_);
      b.masked_msg = r.fixed(payload_len_);
      b.masked_key = r.fixed(payload_len_);
      b.locked_seed = r.fixed(g1_len_);
      b.timestamp_ms = r.u64();
      msg.body = std::move(b);
      break;
    }
    case MsgType::MacConfirm: {
      MacConfirmBody b;
      b.tag = r.fixed(kMacTagBytes);
      msg.body = std::move(b);
      break;
    }
    case MsgType::Reject: {
      RejectBody b;
      b.code = r.u8();
      msg.body = std::move(b);
      break;
    }
  }
  if (!r.done()) return DecodeError::MalformedLength;
  return msg;
}

}  // namespace hiot
