#include "filippov_lab/io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace flab::io {

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

namespace {

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump_rec(it.value(), indent, depth + 1, out);
            }
            out += "\n" + pad_close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars = true;
            for (const auto& e : j) scalars = scalars && !e.is_structured();
            if (scalars) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    dump_rec(j[i], indent, depth + 1, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                dump_rec(j[i], indent, depth + 1, out);
            }
            out += "\n" + pad_close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? fmt17(v) : "null";
            return;
        }
        default: out += j.dump();
    }
}

std::vector<double> coeffs(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, where + ": expected a nonempty array");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw Error(ErrorCode::ParseError, where + ": coefficients must be numbers");
        c.push_back(v.get<double>());
    }
    return c;
}

}  // namespace

std::string dump(const Json& j, int indent) {
    std::string out;
    dump_rec(j, indent, 0, out);
    return out;
}

PwsSystem parse_system(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "system file must be a JSON object");
    std::string name = j.value("name", std::string());
    const auto dom = j.find("x_domain");
    if (dom == j.end() || !dom->is_array() || dom->size() != 2 || !(*dom)[0].is_number() || !(*dom)[1].is_number())
        throw Error(ErrorCode::ParseError, "x_domain must be [lo, hi]");
    const double lo = (*dom)[0].get<double>(), hi = (*dom)[1].get<double>();
    if (!(lo <= hi)) throw Error(ErrorCode::ParseError, "x_domain must satisfy lo <= hi");
    const auto fs = j.find("fields");
    if (fs == j.end() || !fs->is_object()) throw Error(ErrorCode::ParseError, "missing fields object");
    std::array<FieldTriple, 4> f;
    for (int i = 0; i < 4; ++i) {
        const std::string key = "X" + std::to_string(i + 1);
        const auto it = fs->find(key);
        if (it == fs->end() || !it->is_object()) throw Error(ErrorCode::ParseError, "missing field " + key);
        for (const char* comp : {"alpha", "beta", "gamma"})
            if (!it->contains(comp)) throw Error(ErrorCode::ParseError, key + "." + comp + " missing");
        f[i] = {Polynomial(coeffs(it->at("alpha"), key + ".alpha")), Polynomial(coeffs(it->at("beta"), key + ".beta")),
                Polynomial(coeffs(it->at("gamma"), key + ".gamma"))};
    }
    return PwsSystem(name, f, lo, hi);
}

PwsSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

Json system_to_json(const PwsSystem& sys) {
    Json j;
    j["name"] = sys.name;
    j["x_domain"] = Json::array({sys.x_min, sys.x_max});
    Json fields = Json::object();
    for (int i = 0; i < 4; ++i) {
        const auto& f = sys.fields[i];
        Json t;
        t["alpha"] = f.alpha.coeffs();
        t["beta"] = f.beta.coeffs();
        t["gamma"] = f.gamma.coeffs();
        fields["X" + std::to_string(i + 1)] = t;
    }
    j["fields"] = fields;
    return j;
}

std::string canonical_digest(std::string_view json_text) {
    std::string canon;
    try {
        canon = nlohmann::json::parse(json_text).dump();
    } catch (const nlohmann::json::exception&) {
        canon = std::string(json_text);
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

}  // namespace flab::io
