#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "lucasreg/analysis.hpp"
#include "lucasreg/json_io.hpp"
#include "lucasreg/valuation.hpp"

namespace py = pybind11;
using namespace lucasreg;

namespace {

py::int_ to_py_int(const mpz_class& z) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

mpz_class from_py_int(const py::int_& v) {
    return mpz_class(py::str(v).cast<std::string>());
}

py::dict report_dict(const RankReport& r) {
    py::dict d;
    d["p"] = r.p;
    d["case_label"] = to_string(r.case_label);
    d["predicted"] = r.predicted;
    if (r.empirical) {
        d["empirical"] = *r.empirical;
        d["agree"] = r.agree;
    }
    return d;
}

LinearRepresentation build_verified(const SequenceHandle& handle, std::uint64_t base,
                                    std::uint64_t verify_upto) {
    LinearRepresentation rep = build_linrep(handle, base);
    if (const auto bad = first_linrep_mismatch(rep, handle, verify_upto)) {
        throw TruncationUnstable("evaluation mismatch at n=" + std::to_string(*bad));
    }
    rep.verified_upto = verify_upto;
    return rep;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "k-adic valuations of Lucas sequences and k-regularity certificates";

    py::class_<LucasParams>(m, "LucasParams")
        .def(py::init([](long long a, long long b) { return make_params(a, b); }), py::arg("a"),
             py::arg("b"))
        .def_readonly("a", &LucasParams::a)
        .def_readonly("b", &LucasParams::b)
        .def_readonly("delta", &LucasParams::delta)
        .def("__repr__", [](const LucasParams& p) {
            return "LucasParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) +
                   ", delta=" + std::to_string(p.delta) + ")";
        });

    m.def("is_degenerate", &is_degenerate, py::arg("a"), py::arg("b"));

    m.def(
        "lucas_term",
        [](const LucasParams& params, std::uint64_t n) { return to_py_int(lucas_term(params, n)); },
        py::arg("params"), py::arg("n"), "Exact n-th term of the sequence.");

    m.def(
        "lucas_term_mod",
        [](const LucasParams& params, std::uint64_t n, const py::int_& modulus) {
            return to_py_int(lucas_term_mod(params, n, from_py_int(modulus)));
        },
        py::arg("params"), py::arg("n"), py::arg("modulus"),
        "u_n mod m in O(log n) modular matrix multiplications.");

    m.def(
        "nu_int",
        [](std::uint64_t k, const py::int_& m) { return nu_int(k, from_py_int(m)); }, py::arg("k"),
        py::arg("m"), "Largest e with k^e dividing m.");

    m.def("valuation_oracle", &valuation_oracle, py::arg("params"), py::arg("k"), py::arg("n"),
          "Brute-force nu_k(u_n) via escalating modular evaluation.");

    m.def(
        "factorize",
        [](std::uint64_t k) {
            py::list out;
            for (const PrimePower& pp : factorize(k).pairs) out.append(py::make_tuple(pp.p, pp.exp));
            return out;
        },
        py::arg("k"));

    m.def("legendre", &legendre, py::arg("delta"), py::arg("p"));

    m.def(
        "tau_prime", [](const LucasParams& params, std::uint64_t p) { return tau_prime(params, p).tau; },
        py::arg("params"), py::arg("p"), "Rank of apparition of a prime.");

    m.def(
        "tau_squarefree",
        [](const LucasParams& params, std::uint64_t m) { return tau_squarefree(params, m).tau; },
        py::arg("params"), py::arg("m"));

    m.def(
        "rho",
        [](const LucasParams& params, std::uint64_t p) {
            const RhoSpec spec = rho(params, p);
            return py::make_tuple(spec.rho_odd, spec.rho_even);
        },
        py::arg("params"), py::arg("p"), "(rho at odd n, rho at even n).");

    m.def(
        "nu_p_closed",
        [](const LucasParams& params, std::uint64_t p, std::uint64_t n) {
            return nu_p_closed(params, p, n);
        },
        py::arg("params"), py::arg("p"), py::arg("n"), "Closed formula for nu_p(u_n).");

    m.def(
        "nu_k_closed",
        [](const LucasParams& params, std::uint64_t k, std::uint64_t n) {
            return nu_k_closed(params, k, n);
        },
        py::arg("params"), py::arg("k"), py::arg("n"), "Closed formula for nu_k(u_n).");

    m.def(
        "c_k",
        [](const LucasParams& params, std::uint64_t k, const std::string& parity) {
            if (parity != "odd" && parity != "even") {
                throw OutOfRange("parity must be 'odd' or 'even'");
            }
            return to_py_int(
                c_k(params, factorize(k), parity == "odd" ? Parity::odd : Parity::even));
        },
        py::arg("params"), py::arg("k"), py::arg("parity"));

    m.def(
        "nu_k_via_min",
        [](std::uint64_t k, const py::int_& m) { return nu_k_via_min(factorize(k), from_py_int(m)); },
        py::arg("k"), py::arg("m"));

    m.def(
        "trivial_case",
        [](const LucasParams& params, std::uint64_t k) -> std::string {
            switch (trivial_case(params, k)) {
            case TrivialCase::coprime: return "coprime";
            case TrivialCase::identically_zero: return "identically_zero";
            default: return "unsupported";
            }
        },
        py::arg("params"), py::arg("k"));

    m.def(
        "predicted_rank",
        [](const LucasParams& params, std::uint64_t p) { return report_dict(predicted_rank(params, p)); },
        py::arg("params"), py::arg("p"));

    m.def(
        "empirical_rank",
        [](const LucasParams& params, std::uint64_t p, std::size_t prefix_length,
           unsigned depth_cap) {
            return report_dict(empirical_rank(params, p, prefix_length, depth_cap));
        },
        py::arg("params"), py::arg("p"), py::arg("prefix_length") = kDefaultPrefixLength,
        py::arg("depth_cap") = kDefaultDepthCap);

    m.def(
        "verify_identities",
        [](const LucasParams& params, std::uint64_t p, std::uint64_t n) {
            py::list out;
            for (const IdentityReport& r : verify_proof_identities(params, p, n)) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                if (r.witness) d["witness"] = r.witness->n;
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("p"), py::arg("n") = 10000);

    m.def(
        "decompose_check",
        [](const LucasParams& params, std::uint64_t k, std::uint64_t n) {
            decompose_k(params, k, n);
            return true;
        },
        py::arg("params"), py::arg("k"), py::arg("n") = 10000,
        "Checks the parity decomposition of nu_k(u_{n+1}); raises on violation.");

    py::class_<LinearRepresentation>(m, "LinearRepresentation")
        .def_property_readonly("k", [](const LinearRepresentation& r) { return r.k; })
        .def_property_readonly("rank", [](const LinearRepresentation& r) { return r.dim; })
        .def_property_readonly("verified_upto",
                               [](const LinearRepresentation& r) { return r.verified_upto; })
        .def("eval", &eval_linrep, py::arg("n"))
        .def("zero_consistent", &zero_consistent)
        .def("to_json", [](const LinearRepresentation& r) { return linrep_to_json(r).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return linrep_from_json(nlohmann::json::parse(text));
        })
        .def("__repr__", [](const LinearRepresentation& r) {
            return "LinearRepresentation(k=" + std::to_string(r.k) +
                   ", rank=" + std::to_string(r.dim) + ")";
        });

    m.def(
        "linrep_lucas",
        [](const LucasParams& params, std::uint64_t p, std::uint64_t verify_upto) {
            return build_verified(lucas_valuation_handle(params, p), p, verify_upto);
        },
        py::arg("params"), py::arg("p"), py::arg("verify_upto") = 10000,
        "Linear representation of n -> nu_p(u_{n+1}).");

    m.def(
        "linrep_plain",
        [](std::uint64_t k, std::uint64_t verify_upto) {
            return build_verified(plain_valuation_handle(k), k, verify_upto);
        },
        py::arg("k"), py::arg("verify_upto") = 10000,
        "Linear representation of n -> nu_k(n+1).");

    m.def(
        "linrep_constant",
        [](std::uint64_t k, long long value, std::uint64_t verify_upto) {
            return build_verified(constant_handle(value), k, verify_upto);
        },
        py::arg("k"), py::arg("value") = 1, py::arg("verify_upto") = 10000);

    m.attr("__version__") = "0.1.0";
}
