#include "hiot/simnet.hpp"

namespace hiot {

std::vector<Delivery> SimNet::send(uint64_t now_ms, Bytes frame, Fault fault) {
  switch (fault.kind) {
    case Fault::Kind::Drop:
      return {};
    case Fault::Kind::Delay:
      return {{now_ms + latency_ + uint64_t(fault.delay_ms), std::move(frame)}};
    case Fault::Kind::Duplicate: {
      std::vector<Delivery> out;
      out.push_back({now_ms + latency_, frame});
      out.push_back({now_ms + latency_ + 1, std::move(frame)});
      return out;
    }
    case Fault::Kind::Reorder: {
      uint64_t jitter = rng_.next_u64() % (2 * latency_ + 1);
      return {{now_ms + latency_ + jitter, std::move(frame)}};
    }
    case Fault::Kind::None:
      break;
  }
  return {{now_ms + latency_, std::move(frame)}};
}

void SimNet::shuffle(std::vector<Delivery>& batch) {
  for (size_t i = batch.size(); i > 1; i--) {
    size_t j = rng_.next_u64() % i;
    std::swap(batch[i - 1], batch[j]);
  }
}

}  // namespace hiot
