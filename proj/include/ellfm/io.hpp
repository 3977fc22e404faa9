#ifndef ELLFM_IO_HPP
#define ELLFM_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ellfm/errors.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice_spec.hpp"
#include "ellfm/theta.hpp"

namespace ellfm
{

/// Complex numbers are two-element arrays [re, im]; a bare number is read as real.
inline cplx complex_from_json(const nlohmann::json &j)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw domain_error("json: complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json complex_to_json(cplx z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

inline std::vector<cplx> complex_list(const nlohmann::json &j, const char *key)
{
    std::vector<cplx> out;
    if (!j.contains(key)) {
        return out;
    }
    if (!j.at(key).is_array()) {
        throw domain_error(std::string("json: field ") + key + " must be a list");
    }
    for (const auto &e : j.at(key)) {
        out.push_back(complex_from_json(e));
    }
    return out;
}

/// Parameters as read from a JSON file; spectral families missing from the file are empty.
struct ParamsFile
{
    cplx tau{0.0, 1.0};
    double tail_tolerance = 1e-14;
    DynParams params;
    std::vector<cplx> z;
    std::vector<cplx> w;
    std::vector<cplx> z1;
    std::vector<cplx> z2;
    std::vector<cplx> w1;
    std::vector<cplx> w2;

    ThetaContext context() const { return ThetaContext(tau, tail_tolerance); }
};

inline ParamsFile params_from_json(const nlohmann::json &j)
{
    if (!j.is_object()) {
        throw domain_error("json: parameters must be an object");
    }
    for (const char *key : {"tau_im", "gamma", "lambda"}) {
        if (!j.contains(key)) {
            throw domain_error(std::string("json: missing field ") + key);
        }
    }
    ParamsFile p;
    p.tau = {j.value("tau_re", 0.0), j.at("tau_im").get<double>()};
    p.tail_tolerance = j.value("tail_tolerance", 1e-14);
    p.params.gamma = complex_from_json(j.at("gamma"));
    p.params.lambda = complex_list(j, "lambda");
    p.z = complex_list(j, "z");
    p.w = complex_list(j, "w");
    p.z1 = complex_list(j, "z1");
    p.z2 = complex_list(j, "z2");
    p.w1 = complex_list(j, "w1");
    p.w2 = complex_list(j, "w2");
    return p;
}

inline BaseLabel base_label_from_json(const nlohmann::json &j)
{
    if (!j.contains("L") || !j.contains("I")) {
        throw domain_error("json: base label needs L and I");
    }
    return BaseLabel(j.at("L").get<int>(), j.at("I").get<IndexSet>());
}

inline FMLabel fm_label_from_json(const nlohmann::json &j)
{
    for (const char *key : {"k1", "k2", "L1", "L2", "I1", "I2"}) {
        if (!j.contains(key)) {
            throw domain_error(std::string("json: FM label missing field ") + key);
        }
    }
    return FMLabel(j.at("k1").get<int>(), j.at("k2").get<int>(), j.at("L1").get<int>(), j.at("L2").get<int>(),
                   j.at("I1").get<IndexSet>(), j.at("I2").get<IndexSet>());
}

inline nlohmann::json label_to_json(const FMLabel &lb)
{
    return {{"k1", lb.k1()}, {"k2", lb.k2()}, {"L1", lb.L1()}, {"L2", lb.L2()}, {"I1", lb.I1()}, {"I2", lb.I2()}};
}

inline BaseLattice base_lattice_from(const ParamsFile &p, const BaseLabel &lb)
{
    BaseLattice lat{p.z, p.w, p.params, lb};
    lat.validate();
    return lat;
}

inline FMLattice fm_lattice_from(const ParamsFile &p, const FMLabel &lb)
{
    FMLattice lat{p.z1, p.z2, p.w1, p.w2, p.params, lb};
    lat.validate();
    return lat;
}

} // namespace ellfm

#endif
