#include "eirnri/snapshot.hpp"

#include <json.hpp>

#include <fstream>

namespace eirnri {

using nlohmann::json;

InstanceSnapshot InstanceSnapshot::from_instance(const ProblemInstance& instance,
                                                 const Matrix* x_star) {
    InstanceSnapshot snap;
    snap.m = instance.rows();
    snap.n = instance.cols();
    snap.lambda = instance.lambda();
    snap.p = instance.p();
    snap.mask = instance.mask();
    snap.observed_values.reserve(snap.mask.size());
    for (const auto& e : snap.mask) snap.observed_values.push_back(instance.observed()(e.row, e.col));
    if (x_star) snap.x_star = *x_star;
    return snap;
}

ProblemInstance InstanceSnapshot::to_instance() const {
    if (observed_values.size() != mask.size())
        throw std::runtime_error("snapshot: observed/mask length mismatch");
    Matrix observed = Matrix::Zero(m, n);
    for (std::size_t i = 0; i < mask.size(); ++i)
        observed(mask[i].row, mask[i].col) = observed_values[i];
    return ProblemInstance(std::move(observed), mask, lambda, p);
}

void save_snapshot(const std::string& path, const InstanceSnapshot& snap) {
    json j;
    j["format"] = "eirnri-instance/1";
    j["m"] = snap.m;
    j["n"] = snap.n;
    j["lambda"] = snap.lambda;
    j["p"] = snap.p;
    json mask = json::array();
    for (const auto& e : snap.mask) mask.push_back(json::array({e.row, e.col}));
    j["mask"] = std::move(mask);
    j["observed"] = snap.observed_values;
    if (snap.x_star) {
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(snap.x_star->size()));
        for (int i = 0; i < snap.x_star->rows(); ++i)
            for (int k = 0; k < snap.x_star->cols(); ++k) flat.push_back((*snap.x_star)(i, k));
        j["x_star"] = std::move(flat);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
    os << j.dump();
}

InstanceSnapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
    json j = json::parse(is);
    if (j.value("format", "") != std::string("eirnri-instance/1"))
        throw std::runtime_error("load_snapshot: unrecognized format field");
    InstanceSnapshot snap;
    snap.m = j.at("m").get<int>();
    snap.n = j.at("n").get<int>();
    snap.lambda = j.at("lambda").get<double>();
    snap.p = j.at("p").get<double>();
    for (const auto& e : j.at("mask"))
        snap.mask.push_back({e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>()});
    snap.observed_values = j.at("observed").get<std::vector<double>>();
    if (j.contains("x_star")) {
        const auto flat = j.at("x_star").get<std::vector<double>>();
        if (flat.size() != static_cast<std::size_t>(snap.m) * snap.n)
            throw std::runtime_error("load_snapshot: x_star size mismatch");
        Matrix x(snap.m, snap.n);
        std::size_t idx = 0;
        for (int i = 0; i < snap.m; ++i)
            for (int k = 0; k < snap.n; ++k) x(i, k) = flat[idx++];
        snap.x_star = std::move(x);
    }
    return snap;
}

}  // namespace eirnri
