#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "snnmoo/analysis/front.hpp"
#include "snnmoo/io/format.hpp"
#include "snnmoo/moo/nsga3.hpp"

namespace snnmoo::analysis {

namespace detail {
inline void write_header(std::ostream& out, std::initializer_list<std::string> leading,
                         const std::vector<std::string>& genes, const std::vector<std::string>& objectives) {
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) {
            out << ',';
        }
        out << s;
        first = false;
    };
    for (const auto& s : leading) {
        emit(s);
    }
    for (const auto& s : genes) {
        emit(s);
    }
    for (const auto& s : objectives) {
        emit(s);
    }
    out << '\n';
}

inline void write_values(std::ostream& out, const std::vector<double>& values) {
    for (double v : values) {
        out << ',' << io::format_double(v);
    }
}
}  // namespace detail

inline void export_front_csv(const ParetoFront& front, const std::string& path) {
    auto out = io::open_for_write(path);
    detail::write_header(out, {"experiment", "generation", "index"}, front.gene_names, front.objective_names);
    for (const auto& m : front.members) {
        out << front.experiment << ',' << front.generation << ',' << m.index;
        detail::write_values(out, m.genes);
        detail::write_values(out, m.objectives);
        out << '\n';
    }
    io::finish_write(out, path);
}

/// Gene and objective column counts come from the header names.
inline ParetoFront import_front_csv(const std::string& path, std::size_t gene_count) {
    auto in = io::open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path, "empty front file");
    }
    const auto header = io::split_csv_line(line);
    if (header.size() < 3 + gene_count || header[0] != "experiment" || header[1] != "generation" ||
        header[2] != "index") {
        throw IoError(path, "unexpected front header");
    }
    ParetoFront front;
    front.gene_names.assign(header.begin() + 3, header.begin() + 3 + static_cast<long>(gene_count));
    front.objective_names.assign(header.begin() + 3 + static_cast<long>(gene_count), header.end());
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError(path, "front row has the wrong number of fields");
        }
        front.experiment = fields[0];
        front.generation = static_cast<std::size_t>(io::parse_int(fields[1]));
        FrontMember m;
        m.index = static_cast<std::size_t>(io::parse_int(fields[2]));
        for (std::size_t k = 3; k < fields.size(); ++k) {
            (k < 3 + gene_count ? m.genes : m.objectives).push_back(io::parse_double(fields[k]));
        }
        front.members.push_back(std::move(m));
    }
    return front;
}

inline nlohmann::json front_to_json(const ParetoFront& front) {
    nlohmann::json j;
    j["experiment"] = front.experiment;
    j["generation"] = front.generation;
    j["gene_names"] = front.gene_names;
    j["objective_names"] = front.objective_names;
    j["members"] = nlohmann::json::array();
    for (const auto& m : front.members) {
        j["members"].push_back({{"index", m.index}, {"genes", m.genes}, {"objectives", m.objectives}});
    }
    j["metadata"] = front.metadata;
    return j;
}

inline ParetoFront front_from_json(const nlohmann::json& j) {
    ParetoFront front;
    front.experiment = j.at("experiment").get<std::string>();
    front.generation = j.at("generation").get<std::size_t>();
    front.gene_names = j.at("gene_names").get<std::vector<std::string>>();
    front.objective_names = j.at("objective_names").get<std::vector<std::string>>();
    for (const auto& m : j.at("members")) {
        front.members.push_back({m.at("index").get<std::size_t>(), m.at("genes").get<std::vector<double>>(),
                                 m.at("objectives").get<std::vector<double>>()});
    }
    front.metadata = j.value("metadata", nlohmann::json::object());
    return front;
}

inline void export_front_json(const ParetoFront& front, const std::string& path) {
    auto out = io::open_for_write(path);
    out << front_to_json(front).dump(2) << '\n';
    io::finish_write(out, path);
}

inline ParetoFront import_front_json(const std::string& path) {
    try {
        return front_from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("invalid front JSON (") + e.what() + ")");
    }
}

/// One row per individual per generation: generation,index,rank,<genes>,<objectives>.
inline void export_population_csv(const std::vector<moo::Population>& generations,
                                  const std::vector<std::string>& gene_names,
                                  const std::vector<std::string>& objective_names, const std::string& path) {
    auto out = io::open_for_write(path);
    detail::write_header(out, {"generation", "index", "rank"}, gene_names, objective_names);
    for (std::size_t g = 0; g < generations.size(); ++g) {
        const auto& pop = generations[g];
        for (std::size_t i = 0; i < pop.size(); ++i) {
            out << g << ',' << i << ',' << pop[i].rank;
            detail::write_values(out, pop[i].genes);
            detail::write_values(out, pop[i].objectives);
            out << '\n';
        }
    }
    io::finish_write(out, path);
}

struct PopulationTable {
    std::vector<std::string> gene_names;
    std::vector<std::string> objective_names;
    std::vector<moo::Population> generations;
};

inline PopulationTable import_population_csv(const std::string& path, std::size_t gene_count) {
    auto in = io::open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path, "empty population file");
    }
    const auto header = io::split_csv_line(line);
    if (header.size() < 3 + gene_count || header[0] != "generation" || header[1] != "index" || header[2] != "rank") {
        throw IoError(path, "unexpected population header");
    }
    PopulationTable table;
    table.gene_names.assign(header.begin() + 3, header.begin() + 3 + static_cast<long>(gene_count));
    table.objective_names.assign(header.begin() + 3 + static_cast<long>(gene_count), header.end());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError(path, "population line " + std::to_string(line_no) + " has the wrong number of fields");
        }
        const auto g = static_cast<std::size_t>(io::parse_int(fields[0]));
        if (g >= table.generations.size()) {
            table.generations.resize(g + 1);
        }
        moo::Individual ind;
        ind.tag = {g, static_cast<std::size_t>(io::parse_int(fields[1]))};
        ind.rank = static_cast<std::size_t>(io::parse_int(fields[2]));
        for (std::size_t k = 3; k < fields.size(); ++k) {
            (k < 3 + gene_count ? ind.genes : ind.objectives).push_back(io::parse_double(fields[k]));
        }
        table.generations[g].push_back(std::move(ind));
    }
    return table;
}

}  // namespace snnmoo::analysis
