#include "ssg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ssg::io {

using nlohmann::json;

std::string format_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "\"inf-overflow\"" : "\"-inf-overflow\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string double_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out + "]";
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open for writing: " + tmp);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("rename failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SecurityGame read_game(const std::string& path) {
    json j = json::parse(read_file(path));
    SecurityGame game;
    game.num_targets = j.at("T").get<int>();
    game.num_resources = j.at("K").get<int>();
    auto rows = j.at("U");
    if (static_cast<int>(rows.size()) != game.num_targets)
        throw std::invalid_argument("game.json: U must have T rows");
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != game.num_targets)
            throw std::invalid_argument("game.json: U must have T columns");
        for (const auto& v : row) game.payoff.push_back(v.get<double>());
    }
    if (j.contains("R") && !j.at("R").is_null())
        game.rewards = j.at("R").get<std::vector<double>>();
    if (j.contains("P") && !j.at("P").is_null())
        game.penalties = j.at("P").get<std::vector<double>>();
    if (!game.rewards.empty()) {
        game.r_max = 1e-9;
        for (double r : game.rewards) game.r_max = std::max(game.r_max, r);
    }
    if (!game.penalties.empty()) {
        game.p_min = -1e-9;
        for (double p : game.penalties) game.p_min = std::min(game.p_min, p);
    }
    game.validate();
    return game;
}

std::string game_to_json(const SecurityGame& game) {
    std::string out = "{\"T\":" + std::to_string(game.num_targets) +
                      ",\"K\":" + std::to_string(game.num_resources) + ",\"U\":[";
    for (int i = 0; i < game.num_targets; ++i) {
        if (i) out += ",";
        std::vector<double> row(game.payoff.begin() + static_cast<std::size_t>(i) * game.num_targets,
                                game.payoff.begin() +
                                    static_cast<std::size_t>(i + 1) * game.num_targets);
        out += double_array(row);
    }
    out += "]";
    if (!game.rewards.empty()) out += ",\"R\":" + double_array(game.rewards);
    if (!game.penalties.empty()) out += ",\"P\":" + double_array(game.penalties);
    return out + "}\n";
}

AttackDataset read_dataset_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("dataset.csv: missing header");
    int t = 0;
    {
        std::istringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) ++t;
        t -= 1;  // trailing "target" column
    }
    if (t < 2) throw std::invalid_argument("dataset.csv: need at least 2 coverage columns");
    std::vector<AttackRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> x;
        x.reserve(t);
        for (int i = 0; i < t; ++i) {
            if (!std::getline(row, field, ','))
                throw std::invalid_argument("dataset.csv: short row");
            x.push_back(std::stod(field));
        }
        if (!std::getline(row, field, ','))
            throw std::invalid_argument("dataset.csv: missing target column");
        records.push_back({MixedStrategy(std::move(x)), std::stoi(field)});
    }
    return dedupe_dataset(std::move(records));
}

std::string dataset_to_csv(const AttackDataset& data) {
    std::string out;
    for (int i = 0; i < data.num_targets; ++i) out += "x_" + std::to_string(i) + ",";
    out += "target\n";
    for (const AttackRecord& rec : data.records) {
        for (double xi : rec.strategy.coverage) {
            out += format_double(xi);
            out += ",";
        }
        out += std::to_string(rec.target);
        out += "\n";
    }
    return out;
}

QFn LearnedModel::predictor(const SecurityGame* game) const {
    switch (kind) {
        case Kind::Gsuqr: {
            GeneralizedSuqrModel m = gsuqr;
            return [m](const MixedStrategy& x) { return m.predict(x); };
        }
        case Kind::Ssuqr: {
            if (!game)
                throw std::invalid_argument("ssuqr model needs a game for prediction");
            StandardSuqrModel m = ssuqr;
            SecurityGame g = *game;
            return [m, g](const MixedStrategy& x) { return m.predict(g, x); };
        }
        case Kind::Npl: {
            NplModel m = npl;
            return [m](const MixedStrategy& x) { return m.predict(x); };
        }
    }
    throw std::logic_error("LearnedModel: unknown kind");
}

LearnedModel read_model(const std::string& path) {
    json j = json::parse(read_file(path));
    LearnedModel model;
    std::string type = j.at("type").get<std::string>();
    if (type == "gsuqr") {
        model.kind = LearnedModel::Kind::Gsuqr;
        model.gsuqr.w1 = j.at("w1").get<double>();
        model.gsuqr.c = j.at("c").get<std::vector<double>>();
        model.gsuqr.big_m = j.at("M").get<double>();
    } else if (type == "ssuqr") {
        model.kind = LearnedModel::Kind::Ssuqr;
        model.ssuqr.w1 = j.at("w1").get<double>();
        model.ssuqr.w2 = j.at("w2").get<double>();
        model.ssuqr.w3 = j.at("w3").get<double>();
    } else if (type == "npl") {
        model.kind = LearnedModel::Kind::Npl;
        model.npl.khat = j.at("khat").get<double>();
        model.npl.big_m = j.at("M").get<double>();
        model.npl.clamp = j.at("clamp").get<bool>();
        for (const auto& a : j.at("anchors"))
            model.npl.anchors.emplace_back(a.get<std::vector<double>>());
        // values are stored per anchor (rows of length T-1); transpose to
        // the per-component layout.
        std::vector<std::vector<double>> per_anchor;
        for (const auto& v : j.at("values")) per_anchor.push_back(v.get<std::vector<double>>());
        if (per_anchor.size() != model.npl.anchors.size())
            throw std::invalid_argument("model.json: values must match anchors");
        if (!per_anchor.empty()) {
            std::size_t comps = per_anchor.front().size();
            model.npl.values.assign(comps, std::vector<double>(per_anchor.size()));
            for (std::size_t j2 = 0; j2 < per_anchor.size(); ++j2) {
                if (per_anchor[j2].size() != comps)
                    throw std::invalid_argument("model.json: ragged values");
                for (std::size_t i = 0; i < comps; ++i)
                    model.npl.values[i][j2] = per_anchor[j2][i];
            }
        }
        model.npl.kstar = j.at("kstar").get<std::vector<double>>();
        model.npl.validate();
    } else {
        throw std::invalid_argument("model.json: unknown type " + type);
    }
    return model;
}

std::string model_to_json(const LearnedModel& model) {
    switch (model.kind) {
        case LearnedModel::Kind::Gsuqr:
            return "{\"type\":\"gsuqr\",\"w1\":" + format_double(model.gsuqr.w1) +
                   ",\"c\":" + double_array(model.gsuqr.c) +
                   ",\"M\":" + format_double(model.gsuqr.big_m) + "}\n";
        case LearnedModel::Kind::Ssuqr:
            return "{\"type\":\"ssuqr\",\"w1\":" + format_double(model.ssuqr.w1) +
                   ",\"w2\":" + format_double(model.ssuqr.w2) +
                   ",\"w3\":" + format_double(model.ssuqr.w3) + ",\"M\":0}\n";
        case LearnedModel::Kind::Npl: {
            const NplModel& n = model.npl;
            std::string out = "{\"type\":\"npl\",\"khat\":" + format_double(n.khat) +
                              ",\"M\":" + format_double(n.big_m) +
                              ",\"clamp\":" + (n.clamp ? std::string("true") : std::string("false")) +
                              ",\"anchors\":[";
            for (int j = 0; j < n.num_anchors(); ++j) {
                if (j) out += ",";
                out += double_array(n.anchors[j].coverage);
            }
            out += "],\"values\":[";
            for (int j = 0; j < n.num_anchors(); ++j) {
                if (j) out += ",";
                std::vector<double> row(n.values.size());
                for (std::size_t i = 0; i < n.values.size(); ++i) row[i] = n.values[i][j];
                out += double_array(row);
            }
            out += "],\"kstar\":" + double_array(n.kstar) + "}\n";
            return out;
        }
    }
    throw std::logic_error("model_to_json: unknown kind");
}

std::string bounds_to_json(const std::string& model, double m, double ln_m, double ln_capacity) {
    return "{\"model\":\"" + model + "\",\"m\":" + format_double(m) +
           ",\"ln_m\":" + format_double(ln_m) + ",\"ln_capacity\":" + format_double(ln_capacity) +
           "}\n";
}

std::string plan_to_json(const std::vector<double>& x, double utility) {
    return "{\"x\":" + double_array(x) + ",\"utility\":" + format_double(utility) + "}\n";
}

std::string report_to_json(const sim::EvalReport& report, const sim::DecayFit* decay) {
    std::string out = "{\"num_splits\":" + std::to_string(report.num_splits) + ",\"mode\":\"" +
                      report.mode + "\",\"models\":[";
    for (std::size_t k = 0; k < report.models.size(); ++k) {
        const auto& me = report.models[k];
        if (k) out += ",";
        out += "{\"model\":\"" + me.model + "\",\"alphas\":{";
        for (std::size_t d = 0; d < me.alpha_at_delta.size(); ++d) {
            if (d) out += ",";
            out += "\"" + format_double(me.alpha_at_delta[d].first) +
                   "\":" + format_double(me.alpha_at_delta[d].second);
        }
        out += "}}";
    }
    out += "]";
    if (decay) {
        out += ",\"decay\":{\"points\":[";
        for (std::size_t i = 0; i < decay->points.size(); ++i) {
            if (i) out += ",";
            out += "{\"m\":" + std::to_string(decay->points[i].sample_size) +
                   ",\"alpha\":" + format_double(decay->points[i].alpha) + "}";
        }
        out += "],\"coefficient\":" + format_double(decay->coefficient) +
               ",\"r2\":" + format_double(decay->r2) + "}";
    }
    return out + "}\n";
}

std::string report_to_csv(const sim::EvalReport& report, int sample_size,
                          const sim::DecayFit* decay) {
    std::string out = "m,alpha,delta\n";
    for (const auto& me : report.models)
        for (const auto& [delta, alpha] : me.alpha_at_delta)
            out += std::to_string(sample_size) + "," + format_double(alpha) + "," +
                   format_double(delta) + "\n";
    if (decay)
        for (const auto& p : decay->points)
            out += std::to_string(p.sample_size) + "," + format_double(p.alpha) + ",0.5\n";
    return out;
}

}  // namespace ssg::io
