// Command-line front end: key generation, registration demos, in-process
// and networked handshakes, attack scenarios and the benchmark.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <mutex>

#include "hiot/adversary.hpp"
#include "hiot/bench.hpp"
#include "hiot/harness.hpp"
#include "hiot/socket_transport.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 64;
constexpr int kExitProtocol = 65;
constexpr int kExitIo = 74;

using nlohmann::json;

std::string fingerprint(const hiot::Bytes& b) {
  return hiot::hex_encode(b).substr(0, 16);
}

hiot::BackendPtr backend_from_flag(const std::string& name) {
  return hiot::make_backend(name);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  f << text << std::endl;
}

json params_json(const hiot::SystemParams& p) {
  const auto& be = *p.backend;
  return {
      {"backend", be.name()},
      {"order", hiot::hex_encode(be.order_bytes())},
      {"master_pub", hiot::hex_encode(be.g1_to_bytes(p.master_pub))},
      {"security_bits", p.security_bits},
      {"payload_bits", p.payload_bits},
      {"freshness_window_ms", p.freshness_window_ms},
  };
}

json sensor_pub_json(const hiot::SensorParty& sn, const hiot::PairingBackend& be) {
  auto pk = sn.public_key();
  return {
      {"id", std::string(sn.id().begin(), sn.id().end())},
      {"partial_pub", hiot::hex_encode(be.g1_to_bytes(pk.partial_pub))},
      {"pub1", hiot::hex_encode(be.g1_to_bytes(pk.pub1))},
      {"gamma", hiot::hex_encode(be.scalar_to_bytes(pk.gamma))},
  };
}

hiot::Bytes hex_decode(const std::string& hex) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  if (hex.size() % 2) throw std::invalid_argument("odd hex length");
  hiot::Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); i++)
    out[i] = uint8_t(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
  return out;
}

int cmd_keygen(const std::string& backend_name, uint64_t seed,
               const std::string& out_mode, const std::string& out_path) {
  auto backend = backend_from_flag(backend_name);
  hiot::DrbgRng rng(seed);
  auto sys = hiot::setup(backend, 128, 256, 5000, rng);
  auto user = hiot::user_keygen(hiot::to_bytes("user-0"), sys.params, rng);
  auto cred = hiot::issue_credential(sys.master, user.id, user.pk, sys.params, rng);
  auto partial =
      hiot::issue_partial_key(sys.master, hiot::to_bytes("sensor-1"), sys.params, rng);
  const auto& be = *backend;

  json j;
  j["params"] = params_json(sys.params);
  j["master_key"] = hiot::hex_encode(be.scalar_to_bytes(sys.master.s));
  j["user"] = {
      {"id", "user-0"},
      {"sk", hiot::hex_encode(be.scalar_to_bytes(user.sk))},
      {"pk", hiot::hex_encode(be.g1_to_bytes(user.pk))},
      {"credential",
       {{"acd", hiot::hex_encode(be.g1_to_bytes(cred.acd))},
        {"sig", hiot::hex_encode(be.scalar_to_bytes(cred.sig))},
        {"delta", hiot::hex_encode(be.scalar_to_bytes(cred.delta))},
        {"verifies", hiot::verify_credential(cred, sys.params)}}},
  };
  j["sensor"] = {
      {"id", "sensor-1"},
      {"partial_pub", hiot::hex_encode(be.g1_to_bytes(partial.partial_pub))},
      {"partial_key", hiot::hex_encode(be.scalar_to_bytes(partial.partial_key))},
      {"gamma", hiot::hex_encode(be.scalar_to_bytes(partial.gamma))},
      {"pairing_check", hiot::verify_partial_key(partial, sys.params)},
  };

  if (out_mode == "json") {
    emit(j.dump(2), out_path);
  } else {
    std::string s = "backend: " + be.name() + "\n";
    s += "master_pub: " + std::string(j["params"]["master_pub"]) + "\n";
    s += "user-0 pk: " + std::string(j["user"]["pk"]) + "\n";
    s += "user-0 credential verifies: " +
         std::string(j["user"]["credential"]["verifies"] ? "yes" : "no") + "\n";
    s += "sensor-1 pairing check: " +
         std::string(j["sensor"]["pairing_check"] ? "yes" : "no");
    emit(s, out_path);
  }
  return kExitOk;
}

int cmd_register(const std::string& backend_name, uint64_t seed,
                 const std::string& out_mode, const std::string& out_path) {
  hiot::Harness h(backend_from_flag(backend_name), seed);
  const auto& be = *h.params().backend;
  json j;
  j["params"] = params_json(h.params());
  j["user"] = {
      {"id", std::string(h.user().id().begin(), h.user().id().end())},
      {"phase", "registered"},
      {"acd", hiot::hex_encode(be.g1_to_bytes(h.user().credential().acd))},
  };
  j["sensor"] = sensor_pub_json(h.sensor(), be);
  j["sensor"]["directory_entries"] = h.sensor().directory_size();
  if (out_mode == "json") {
    emit(j.dump(2), out_path);
  } else {
    emit("registration complete: user acd " +
             std::string(j["user"]["acd"]).substr(0, 16) + "..., directory " +
             std::to_string(h.sensor().directory_size()) + " entry(ies)",
         out_path);
  }
  return kExitOk;
}

int cmd_handshake_local(const std::string& backend_name, uint64_t seed,
                        const std::string& out_mode,
                        const std::string& out_path) {
  hiot::Harness h(backend_from_flag(backend_name), seed);
  auto res = h.handshake();
  json j;
  j["backend"] = h.params().backend->name();
  j["seed"] = seed;
  j["established"] = res.established;
  j["keys_equal"] = res.established && res.user_key == res.sensor_key;
  j["user_key_fingerprint"] = fingerprint(res.user_key);
  j["sensor_key_fingerprint"] = fingerprint(res.sensor_key);
  j["request_bytes"] = res.request_frame.size();
  if (out_mode == "json") {
    emit(j.dump(2), out_path);
  } else {
    emit("handshake " +
             std::string(res.established ? "established" : "FAILED") +
             "\nuser key:   " + fingerprint(res.user_key) +
             "\nsensor key: " + fingerprint(res.sensor_key),
         out_path);
  }
  return res.established && res.user_key == res.sensor_key ? kExitOk
                                                           : kExitProtocol;
}

struct ServerState {
  std::unique_ptr<hiot::Harness> harness;
  std::mutex mu;
  hiot::SystemClock clock;
};

int cmd_serve(const std::string& backend_name, uint64_t seed,
              const std::string& listen, const std::string& info_out) {
  auto pos = listen.rfind(':');
  if (pos == std::string::npos) {
    std::cerr << "listen address must be host:port\n";
    return kExitUsage;
  }
  std::string host = listen.substr(0, pos);
  uint16_t port = uint16_t(std::stoul(listen.substr(pos + 1)));

  ServerState st;
  st.harness = std::make_unique<hiot::Harness>(backend_from_flag(backend_name),
                                               seed);
  hiot::Harness& h = *st.harness;

  json info;
  info["params"] = params_json(h.params());
  info["sensor"] = sensor_pub_json(h.sensor(), *h.params().backend);

  hiot::TcpServer server;
  try {
    port = server.listen(host, port);
  } catch (const std::system_error& e) {
    std::cerr << "listen failed: " << e.what() << "\n";
    return kExitIo;
  }
  info["listen"] = host + ":" + std::to_string(port);
  emit(info.dump(2), info_out);
  if (!info_out.empty())
    std::cout << "serving on " << host << ":" << port << " (info in "
              << info_out << ")" << std::endl;

  server.serve_async([&st](const hiot::Bytes& frame) {
    std::lock_guard<std::mutex> lock(st.mu);
    hiot::Harness& h = *st.harness;
    std::vector<hiot::Bytes> out;
    auto decoded = h.codec().decode(frame);
    if (std::holds_alternative<hiot::DecodeError>(decoded)) {
      out.push_back(h.codec().encode(
          hiot::WireMessage{hiot::RejectBody{hiot::kRejectCodeMalformed}}));
      return out;
    }
    const auto& msg = std::get<hiot::WireMessage>(decoded);
    switch (msg.type()) {
      case hiot::MsgType::RegUserReq: {
        // Registration runs over the trusted-deployment channel; the
        // gateway lives next to the sensor in this server.
        hiot::SystemRng rng;
        for (const auto& reply : h.gwn().handle(msg, rng))
          out.push_back(h.codec().encode(reply));
        // Keep the co-hosted sensor's directory current.
        for (const auto& push : h.gwn().directory_pushes())
          (void)h.sensor().process_directory_push(push);
        break;
      }
      case hiot::MsgType::ServiceRequest: {
        auto outcome = h.sensor().handle_request(msg, st.clock);
        out.push_back(h.codec().encode(outcome.reply));
        break;
      }
      default:
        out.push_back(h.codec().encode(
            hiot::WireMessage{hiot::RejectBody{hiot::kRejectCodeMalformed}}));
    }
    return out;
  });

  std::cout << "press enter to stop" << std::endl;
  std::cin.get();
  server.stop();
  return kExitOk;
}

int cmd_handshake_remote(const std::string& connect_addr,
                         const std::string& info_path, uint64_t seed,
                         const std::string& out_mode,
                         const std::string& out_path) {
  std::ifstream f(info_path);
  if (!f) {
    std::cerr << "cannot read " << info_path << "\n";
    return kExitIo;
  }
  json info = json::parse(f, nullptr, false);
  if (info.is_discarded()) {
    std::cerr << "bad server info file\n";
    return kExitIo;
  }

  auto backend =
      backend_from_flag(info["params"]["backend"].get<std::string>());
  // Rebuild public parameters from the server's announcement.
  auto master_pub = backend->g1_from_bytes(
      hex_decode(info["params"]["master_pub"].get<std::string>()));
  if (!master_pub) {
    std::cerr << "bad master_pub in info file\n";
    return kExitIo;
  }
  hiot::SystemParams params{backend,
                            backend->g1_generator(),
                            *master_pub,
                            backend->pair(backend->g1_generator(),
                                          backend->g1_generator()),
                            info["params"]["security_bits"].get<uint32_t>(),
                            info["params"]["payload_bits"].get<size_t>(),
                            info["params"]["freshness_window_ms"].get<int64_t>(),
                            hiot::HashSuite(backend,
                                            info["params"]["payload_bits"]
                                                .get<size_t>())};
  std::string sid = info["sensor"]["id"].get<std::string>();
  hiot::SensorPublicKey spk;
  auto t_point = backend->g1_from_bytes(
      hex_decode(info["sensor"]["partial_pub"].get<std::string>()));
  auto pub1 = backend->g1_from_bytes(
      hex_decode(info["sensor"]["pub1"].get<std::string>()));
  auto gamma = backend->scalar_from_bytes(
      hex_decode(info["sensor"]["gamma"].get<std::string>()));
  if (!t_point || !pub1 || !gamma) {
    std::cerr << "bad sensor key in info file\n";
    return kExitIo;
  }
  spk = {*t_point, *pub1, *gamma};

  auto pos = connect_addr.rfind(':');
  if (pos == std::string::npos) {
    std::cerr << "connect address must be host:port\n";
    return kExitUsage;
  }

  hiot::WireCodec codec = hiot::WireCodec::for_params(params);
  hiot::DrbgRng rng(seed);
  hiot::SystemClock clock;
  hiot::UserParty user(hiot::to_bytes("remote-user"), params);

  hiot::TcpClient client;
  try {
    client.connect(connect_addr.substr(0, pos),
                   uint16_t(std::stoul(connect_addr.substr(pos + 1))));
    client.send(codec.encode(user.registration_request(rng)));
    auto resp = client.recv();
    if (!resp) throw std::runtime_error("connection closed at registration");
    auto decoded = codec.decode(*resp);
    if (std::holds_alternative<hiot::DecodeError>(decoded) ||
        !user.process_registration(std::get<hiot::WireMessage>(decoded))) {
      std::cerr << "registration rejected\n";
      return kExitProtocol;
    }
    user.learn_sensor(hiot::to_bytes(sid), spk);

    hiot::Bytes payload = rng.bytes(params.payload_bytes());
    client.send(codec.encode(
        user.begin_auth(hiot::to_bytes(sid), payload, clock, rng)));
    auto reply = client.recv();
    if (!reply) throw std::runtime_error("connection closed at handshake");
    auto rmsg = codec.decode(*reply);
    if (std::holds_alternative<hiot::DecodeError>(rmsg)) {
      std::cerr << "bad reply frame\n";
      return kExitProtocol;
    }
    auto outcome = user.complete_auth(std::get<hiot::WireMessage>(rmsg));
    bool ok = outcome == hiot::UserParty::ConfirmOutcome::Established;
    json j;
    j["established"] = ok;
    if (ok) j["session_key_fingerprint"] = fingerprint(user.session()->key);
    if (out_mode == "json")
      emit(j.dump(2), out_path);
    else
      emit(ok ? "established, key " + fingerprint(user.session()->key)
              : "handshake failed",
           out_path);
    return ok ? kExitOk : kExitProtocol;
  } catch (const std::system_error& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PKI-to-CLC anonymous mutual authentication toolkit"};
  app.require_subcommand(1);

  std::string backend = "toy";
  uint64_t seed = 1;
  std::string out_mode = "text";
  std::string out_path;
  app.add_option("--backend", backend, "toy | toy-large | production")
      ->envname("HIOT_BACKEND");
  app.add_option("--seed", seed, "deterministic run seed");
  app.add_option("--out", out_mode, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out-file", out_path, "write output to a file");

  auto* keygen = app.add_subcommand("keygen", "generate system and demo keys");
  auto* reg = app.add_subcommand("register", "run the registration flows");
  auto* hs = app.add_subcommand("handshake", "run a full handshake");
  std::string connect_addr, info_path;
  hs->add_option("--connect", connect_addr, "host:port of a running server");
  hs->add_option("--info", info_path, "server info JSON (from serve)");

  auto* serve = app.add_subcommand("serve", "serve gateway+sensor over TCP");
  std::string listen_addr = "127.0.0.1:0";
  std::string info_out;
  serve->add_option("--listen", listen_addr, "host:port (port 0 = ephemeral)");
  serve->add_option("--info-out", info_out, "write params+sensor key JSON");

  auto* attack = app.add_subcommand("attack", "run an adversary scenario");
  std::string scenario;
  size_t scale = 0;
  std::string report_mode;
  attack->add_option("scenario", scenario, "replay|dos|tamper|impersonation|anonymity")
      ->required();
  attack->add_option("--scale", scale,
                     "volume/attempts/sessions override (0 = default)");
  attack->add_option("--report", report_mode, "json | text (alias of --out)")
      ->check(CLI::IsMember({"json", "text"}));

  auto* bench = app.add_subcommand("bench", "operation counts and timings");
  uint64_t iterations = 10;
  bench->add_option("--iterations", iterations, "timed runs");

  // global flags are accepted after the subcommand too
  for (CLI::App* sub : {keygen, reg, hs, serve, attack, bench})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*keygen) return cmd_keygen(backend, seed, out_mode, out_path);
    if (*reg) return cmd_register(backend, seed, out_mode, out_path);
    if (*hs) {
      if (!connect_addr.empty())
        return cmd_handshake_remote(connect_addr, info_path, seed, out_mode,
                                    out_path);
      return cmd_handshake_local(backend, seed, out_mode, out_path);
    }
    if (*serve) return cmd_serve(backend, seed, listen_addr, info_out);
    if (*attack) {
      auto rep = hiot::run_scenario(scenario, backend_from_flag(backend), seed,
                                    scale);
      std::string mode = report_mode.empty() ? out_mode : report_mode;
      emit(mode == "json" ? rep.to_json() : rep.to_text(), out_path);
      return rep.pass ? kExitOk : kExitProtocol;
    }
    if (*bench) {
      auto rep = hiot::run_benchmark(backend_from_flag(backend), iterations,
                                     seed);
      emit(out_mode == "json" ? rep.to_json() : rep.to_text(), out_path);
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProtocol;
  }
  return kExitUsage;
}
