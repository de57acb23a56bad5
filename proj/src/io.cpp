#include "qgreedy/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qgreedy/error.hpp"

namespace qgreedy {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key)) throw InvalidInput(std::string(where) + ": missing field \"" + key + "\"");
    return obj.at(key);
}

double number(const json& v, const char* what) {
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) return kInf;
    if (!v.is_number()) throw InvalidInput(std::string(what) + " must be a number");
    return v.get<double>();
}

std::vector<Vector> matrix(const json& v, const char* what) {
    if (!v.is_array()) throw InvalidInput(std::string(what) + " must be an array of rows");
    std::vector<Vector> rows;
    for (const auto& row : v) {
        if (!row.is_array()) throw InvalidInput(std::string(what) + " rows must be arrays");
        Vector r;
        for (const auto& x : row) r.push_back(number(x, what));
        rows.push_back(std::move(r));
    }
    return rows;
}

AmbientSpace ambient_from_json(const json& a) {
    const std::string kind = require(a, "kind", "ambient").get<std::string>();
    if (kind == "lp") {
        double p = number(require(a, "p", "ambient"), "ambient.p");
        const json& dim = require(a, "dim", "ambient");
        if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) throw InvalidInput("ambient.dim must be a positive integer");
        return AmbientSpace::lp(p, dim.get<std::size_t>());
    }
    if (kind == "block_lp_l2") {
        double p = number(require(a, "p", "ambient"), "ambient.p");
        std::vector<std::size_t> blocks;
        for (const auto& b : require(a, "blocks", "ambient")) {
            if (!b.is_number_unsigned()) throw InvalidInput("ambient.blocks entries must be positive integers");
            blocks.push_back(b.get<std::size_t>());
        }
        return AmbientSpace::block_lp_l2(p, std::move(blocks));
    }
    if (kind == "lorentz") {
        double q = number(require(a, "q", "ambient"), "ambient.q");
        Vector w;
        for (const auto& x : require(a, "weight", "ambient")) w.push_back(number(x, "ambient.weight"));
        return AmbientSpace::lorentz(q, Weight(std::move(w)));
    }
    throw InvalidInput("ambient.kind must be one of lp, block_lp_l2, lorentz; got \"" + kind + "\"");
}

json number_json(double x) {
    if (std::isinf(x)) return "inf";
    return x;
}

} // namespace

Basis basis_from_json(const json& doc) {
    try {
        AmbientSpace space = ambient_from_json(require(doc, "ambient", "basis"));
        auto vectors = matrix(require(doc, "vectors", "basis"), "vectors");
        std::optional<std::vector<Vector>> duals;
        if (doc.contains("duals") && !doc.at("duals").is_null()) duals = matrix(doc.at("duals"), "duals");
        std::vector<std::string> labels;
        if (doc.contains("labels"))
            for (const auto& l : doc.at("labels")) labels.push_back(l.get<std::string>());
        std::string name = doc.contains("name") ? doc.at("name").get<std::string>() : "custom";
        return Basis(std::move(space), std::move(vectors), std::move(duals), std::move(labels), std::move(name));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("basis JSON schema violation: ") + e.what());
    }
}

json ambient_to_json(const AmbientSpace& space) {
    json a;
    a["kind"] = space.kind();
    if (const auto* s = std::get_if<LpSpace>(&space.variant())) {
        a["p"] = number_json(s->p);
        a["dim"] = s->dim;
    } else if (const auto* b = std::get_if<BlockLpL2Space>(&space.variant())) {
        a["p"] = number_json(b->p);
        a["blocks"] = b->blocks;
    } else {
        const auto& l = std::get<LorentzSpace>(space.variant());
        a["q"] = number_json(l.q);
        a["weight"] = l.weight.values();
    }
    return a;
}

json basis_to_json(const Basis& basis) {
    json doc;
    doc["name"] = basis.name();
    doc["ambient"] = ambient_to_json(basis.space());
    doc["vectors"] = basis.vector_rows();
    doc["duals"] = basis.dual_rows();
    if (!basis.labels().empty()) doc["labels"] = basis.labels();
    return doc;
}

Basis load_basis(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open basis file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw InvalidInput("basis file " + path + " is not valid JSON: " + e.what());
    }
    return basis_from_json(doc);
}

void save_report(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
    if (!out) throw InvalidInput("write to " + path + " failed");
}

} // namespace qgreedy
