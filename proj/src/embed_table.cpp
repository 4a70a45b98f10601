#include "screp/embed_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "screp/errors.hpp"

namespace screp::embed {

const std::vector<double>& EmbeddingTable::vector_for(int token) const {
    auto it = vectors.find(token);
    if (it == vectors.end())
        throw ValidationError("token " + std::to_string(token) +
                              " missing from embedding table");
    return it->second;
}

bool EmbeddingTable::all_finite() const {
    for (const auto& [_, v] : vectors)
        for (double x : v)
            if (!std::isfinite(x)) return false;
    return true;
}

void save_table(std::ostream& out, const EmbeddingTable& table) {
    out << table.vectors.size() << ' ' << table.dim << '\n';
    char buf[32];
    for (const auto& [token, vec] : table.vectors) {
        if (vec.size() != table.dim)
            throw ValidationError("embedding table vector for token " +
                                  std::to_string(token) + " has wrong length");
        out << token;
        for (double v : vec) {
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

EmbeddingTable load_table(std::istream& in) {
    std::string line;
    // provenance comments may precede the header line
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        break;
    }
    if (!in && line.empty()) throw ParseError("embedding file is empty");

    std::istringstream header(line);
    std::size_t count = 0, dim = 0;
    if (!(header >> count >> dim) || dim == 0)
        throw ParseError("embedding file: bad header line '" + line + "'");

    EmbeddingTable table;
    table.dim = dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int token;
        if (!(ls >> token))
            throw ParseError("embedding line " + std::to_string(lineno) + ": bad token");
        std::vector<double> vec(dim);
        for (std::size_t k = 0; k < dim; ++k)
            if (!(ls >> vec[k]))
                throw ParseError("embedding line " + std::to_string(lineno) +
                                 ": expected " + std::to_string(dim) + " components");
        double trailing;
        if (ls >> trailing)
            throw ParseError("embedding line " + std::to_string(lineno) +
                             ": more components than declared dim");
        auto [_, inserted] = table.vectors.emplace(token, std::move(vec));
        if (!inserted)
            throw ValidationError("embedding line " + std::to_string(lineno) +
                                  ": duplicate token " + std::to_string(token));
    }
    if (table.vectors.empty()) throw ParseError("embedding file has no vectors");
    if (table.vectors.size() != count)
        throw ValidationError("embedding file declares " + std::to_string(count) +
                              " vectors but contains " +
                              std::to_string(table.vectors.size()));
    return table;
}

void save_table_file(const std::string& path, const EmbeddingTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write embedding file: " + path);
    save_table(out, table);
}

EmbeddingTable load_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path);
    return load_table(in);
}

} // namespace screp::embed
