#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sporc/dataset.hpp"

namespace sporc {

using nlohmann::json;

static Eigen::VectorXd to_vector(const json& arr, long line, const char* key) {
    if (!arr.is_array())
        throw ParseError(std::string("dataset: \"") + key + "\" must be an array", line);
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ParseError(std::string("dataset: non-numeric entry in \"") + key + "\"", line);
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

Dataset read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("dataset: cannot open " + path);

    Dataset out;
    std::string text;
    long line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("dataset: ") + e.what(), line);
        }
        for (const char* key : {"x", "c", "a"})
            if (!obj.contains(key))
                throw ParseError(std::string("dataset: missing key \"") + key + "\"", line);

        ContextSample s;
        s.x = to_vector(obj["x"], line, "x");
        s.c = to_vector(obj["c"], line, "c");
        if (!obj["a"].is_array())
            throw ParseError("dataset: \"a\" must be an array of arrays", line);
        for (const auto& row : obj["a"]) s.a.push_back(to_vector(row, line, "a"));

        if (out.samples.empty()) {
            out.dims.p = static_cast<int>(s.x.size());
            out.dims.d = static_cast<int>(s.c.size());
            out.dims.m = static_cast<int>(s.a.size());
        }
        out.samples.push_back(std::move(s));
    }
    out.dims.n = static_cast<int>(out.samples.size());
    out.validate();
    return out;
}

void write_jsonl(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("dataset: cannot write " + path);
    for (const auto& s : data.samples) {
        json obj;
        obj["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
        obj["c"] = std::vector<double>(s.c.data(), s.c.data() + s.c.size());
        json rows = json::array();
        for (const auto& row : s.a)
            rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
        obj["a"] = rows;
        out << obj.dump() << "\n";
    }
}

}  // namespace sporc
