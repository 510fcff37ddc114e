// Python bindings: the handshake, the stateless signcryption algorithms,
// the attack scenarios and the benchmark, at the granularity a notebook
// or integration script wants.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiot/adversary.hpp"
#include "hiot/bench.hpp"
#include "hiot/harness.hpp"

namespace py = pybind11;
using namespace hiot;

namespace {

Bytes to_vec(const py::bytes& b) {
  std::string s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes to_py(const Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

// Owning bundle of one deployed system, mirroring the C++ harness.
struct PySystem {
  explicit PySystem(const std::string& backend, uint64_t seed,
                    size_t user_count)
      : harness(make_backend(backend), seed, [&] {
          Harness::Options o;
          o.user_count = user_count;
          return o;
        }()) {}

  Harness harness;
};

}  // namespace

PYBIND11_MODULE(hiotauth, m) {
  m.doc() =
      "Anonymous mutual authentication and key agreement between a PKI "
      "user and a certificateless sensor via a gateway";

  m.def("backends", [] {
    return std::vector<std::string>{"toy", "toy-large", "production"};
  });

  py::class_<PySystem>(m, "System")
      .def(py::init<const std::string&, uint64_t, size_t>(),
           py::arg("backend") = "toy", py::arg("seed") = 1,
           py::arg("users") = 1)
      .def_property_readonly(
          "backend",
          [](PySystem& s) { return s.harness.params().backend->name(); })
      .def("handshake",
           [](PySystem& s, size_t user) {
             auto res = s.harness.handshake(user);
             py::dict d;
             d["established"] = res.established;
             d["keys_equal"] =
                 res.established && res.user_key == res.sensor_key;
             d["user_key"] = to_py(res.user_key);
             d["sensor_key"] = to_py(res.sensor_key);
             d["request_bytes"] = res.request_frame.size();
             d["confirm_bytes"] = res.reply_frame.size();
             return d;
           },
           py::arg("user") = 0)
      .def("signcrypt_roundtrip",
           [](PySystem& s, const py::bytes& payload) {
             Bytes m = to_vec(payload);
             auto& h = s.harness;
             auto sc = signcrypt(h.user().keypair(), h.user().credential(),
                                 h.sensor().public_key(), m, h.params(),
                                 h.rng());
             auto res = unsigncrypt(h.sensor().key_material(),
                                    h.user().keypair().pk, sc.masked_acd,
                                    sc.sigma, h.params());
             py::dict d;
             bool ok = std::holds_alternative<UnsigncryptOk>(res);
             d["accepted"] = ok;
             if (ok)
               d["payload"] = to_py(std::get<UnsigncryptOk>(res).payload);
             return d;
           })
      .def("payload_bytes",
           [](PySystem& s) { return s.harness.params().payload_bytes(); })
      .def("user_counts",
           [](PySystem& s) {
             py::dict d;
             auto& c = s.harness.user().counters();
             d["authentication"] =
                 c.at(Entity::User, Phase::Authentication).brief();
             d["registration"] =
                 c.at(Entity::User, Phase::Registration).brief();
             return d;
           });

  m.def(
      "attack",
      [](const std::string& scenario, const std::string& backend,
         uint64_t seed, size_t scale) {
        auto rep = run_scenario(scenario, make_backend(backend), seed, scale);
        py::dict d;
        d["scenario"] = rep.name;
        d["backend"] = rep.backend;
        d["pass"] = rep.pass;
        d["checks"] = rep.checks;
        d["metrics"] = rep.metrics;
        return d;
      },
      py::arg("scenario"), py::arg("backend") = "toy-large",
      py::arg("seed") = 1, py::arg("scale") = 0);

  m.def(
      "bench",
      [](const std::string& backend, uint64_t iterations, uint64_t seed) {
        auto rep = run_benchmark(make_backend(backend), iterations, seed);
        py::dict d;
        d["backend"] = rep.backend;
        d["json"] = rep.to_json();
        d["user_auth"] =
            rep.counts.at(Entity::User, Phase::Authentication).brief();
        d["sensor_auth"] =
            rep.counts.at(Entity::Sensor, Phase::Authentication).brief();
        d["sensor_reg_pairings"] =
            rep.counts.at(Entity::Sensor, Phase::Registration).pairings;
        d["auth_mean_ms"] = rep.auth_time.mean_ms;
        d["handshake_bits"] = rep.handshake_bits;
        return d;
      },
      py::arg("backend") = "toy", py::arg("iterations") = 5,
      py::arg("seed") = 1);
}
