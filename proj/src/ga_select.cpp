#include "sforge/ga_select.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/plsr.hpp"
#include "sforge/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace sforge {

void GaConfig::validate(int bands) const {
    if (population < 4 || population % 2 != 0)
        throw BadConfig("ga population must be even and >= 4");
    if (generations < 0) throw BadConfig("ga generations must be >= 0");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw BadConfig("crossover_rate outside [0,1]");
    if (mutation_rate > 1.0) throw BadConfig("mutation_rate outside [0,1]");
    if (tournament_size < 1) throw BadConfig("tournament_size must be >= 1");
    if (elitism < 0 || elitism >= population)
        throw BadConfig("elitism must be in [0, population)");
    if (target_k < 0 || target_k > bands)
        throw BadConfig("target_k must be in [0, band count]");
    if (target_k == 0 && size_penalty < 0.0)
        throw BadConfig("size_penalty must be >= 0 in free-size mode");
    if (inner_max_lv < 1) throw BadConfig("inner_max_lv must be >= 1");
}

double GaConfig::resolved_mutation_rate(int bands) const {
    return mutation_rate < 0.0 ? 1.0 / bands : mutation_rate;
}

int Chromosome::gene_count() const {
    int k = 0;
    for (auto g : genes) k += g ? 1 : 0;
    return k;
}

double ga_fitness(const std::vector<std::uint8_t>& genes, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const GaConfig& config) {
    std::vector<int> cols;
    for (std::size_t b = 0; b < genes.size(); ++b)
        if (genes[b]) cols.push_back(static_cast<int>(b));
    const int k = static_cast<int>(cols.size());
    if (k == 0) throw BadConfig("fitness of an empty chromosome");

    Eigen::MatrixXd sub(X.rows(), k);
    for (int j = 0; j < k; ++j) sub.col(j) = X.col(cols[j]);

    const int max_lv =
        std::min({config.inner_max_lv, k, static_cast<int>(X.rows()) - 2});
    if (max_lv < 1) return std::numeric_limits<double>::infinity();
    double best;
    try {
        const LvSelection sel = select_lv_loocv(sub, y, max_lv);
        best = sel.rmsecv[sel.best_lv - 1];
    } catch (const RankDeficient&) {
        return std::numeric_limits<double>::infinity();
    }
    if (config.target_k == 0) best += config.size_penalty * k;
    return best;
}

namespace {

// Repair in place: free-size mode only guarantees a nonempty mask; fixed-k
// randomly flips genes until exactly k are set.
void repair(std::vector<std::uint8_t>& genes, int target_k, Rng& rng) {
    std::vector<int> on, off;
    for (std::size_t b = 0; b < genes.size(); ++b)
        (genes[b] ? on : off).push_back(static_cast<int>(b));
    if (target_k == 0) {
        if (on.empty()) genes[off[rng.below(off.size())]] = 1;
        return;
    }
    while (static_cast<int>(on.size()) > target_k) {
        const std::size_t pick = rng.below(on.size());
        genes[on[pick]] = 0;
        off.push_back(on[pick]);
        on[pick] = on.back();
        on.pop_back();
    }
    while (static_cast<int>(on.size()) < target_k) {
        const std::size_t pick = rng.below(off.size());
        genes[off[pick]] = 1;
        on.push_back(off[pick]);
        off[pick] = off.back();
        off.pop_back();
    }
}

} // namespace

GaResult ga_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const std::vector<double>& wavelengths_nm, const GaConfig& config) {
    const int bands = static_cast<int>(X.cols());
    if (X.rows() < 10) throw BadConfig("ga_select needs at least 10 samples");
    if (bands < 4) throw BadConfig("ga_select needs at least 4 bands");
    if (static_cast<int>(wavelengths_nm.size()) != bands)
        throw ShapeMismatch("wavelength axis length != band count");
    config.validate(bands);

    Rng rng(config.seed);
    const double p_init =
        config.target_k == 0 ? 0.5 : static_cast<double>(config.target_k) / bands;
    const double p_mut = config.resolved_mutation_rate(bands);

    std::unordered_map<std::string, double> memo;
    auto eval = [&](Chromosome& c) {
        const std::string key(c.genes.begin(), c.genes.end());
        auto it = memo.find(key);
        if (it == memo.end())
            it = memo.emplace(key, ga_fitness(c.genes, X, y, config)).first;
        c.fitness = it->second;
    };

    std::vector<Chromosome> pop(config.population);
    for (auto& c : pop) {
        c.genes.resize(bands);
        for (int b = 0; b < bands; ++b) c.genes[b] = rng.bernoulli(p_init) ? 1 : 0;
        repair(c.genes, config.target_k, rng);
        eval(c);
    }

    auto best_index = [&]() {
        std::size_t bi = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (pop[i].fitness < pop[bi].fitness) bi = i;
        return bi;
    };

    GaResult result;
    result.config = config;
    result.best = pop[best_index()];
    result.trace.push_back(result.best.fitness);

    std::vector<std::size_t> rank(pop.size());
    for (int gen = 0; gen < config.generations; ++gen) {
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
            return pop[a].fitness < pop[b].fitness;
        });

        std::vector<Chromosome> next;
        next.reserve(pop.size());
        for (int e = 0; e < config.elitism; ++e) next.push_back(pop[rank[e]]);

        auto tournament = [&]() -> const Chromosome& {
            std::size_t winner = rng.below(pop.size());
            for (int t = 1; t < config.tournament_size; ++t) {
                const std::size_t challenger = rng.below(pop.size());
                if (pop[challenger].fitness < pop[winner].fitness) winner = challenger;
            }
            return pop[winner];
        };

        while (next.size() < pop.size()) {
            const Chromosome& a = tournament();
            const Chromosome& b = tournament();
            Chromosome child;
            child.genes.resize(bands);
            if (rng.uniform01() < config.crossover_rate) {
                for (int g = 0; g < bands; ++g)
                    child.genes[g] = rng.bernoulli(0.5) ? a.genes[g] : b.genes[g];
            } else {
                child.genes = a.genes;
            }
            for (int g = 0; g < bands; ++g)
                if (rng.uniform01() < p_mut) child.genes[g] ^= 1;
            repair(child.genes, config.target_k, rng);
            eval(child);
            next.push_back(std::move(child));
        }
        pop = std::move(next);

        const Chromosome& gen_best = pop[best_index()];
        if (gen_best.fitness < result.best.fitness) result.best = gen_best;
        result.trace.push_back(result.best.fitness);
    }

    for (int b = 0; b < bands; ++b)
        if (result.best.genes[b]) {
            result.selected_bands.push_back(b);
            result.selected_wavelengths.push_back(wavelengths_nm[b]);
        }
    return result;
}

void write_selected_bands_csv(const std::string& path, const GaResult& result) {
    CsvTable t;
    t.header = {"band_index", "wavelength_nm"};
    for (std::size_t i = 0; i < result.selected_bands.size(); ++i)
        t.rows.push_back({std::to_string(result.selected_bands[i]),
                          fmt_g17(result.selected_wavelengths[i])});
    write_csv(path, t);
}

std::vector<int> read_selected_bands_csv(const std::string& path,
                                         std::vector<double>* wavelengths_nm) {
    CsvTable t = read_csv(path);
    if (t.header.size() != 2 || t.header[0] != "band_index")
        throw ParseError(path + ": expected band_index,wavelength_nm header");
    std::vector<int> bands;
    if (wavelengths_nm) wavelengths_nm->clear();
    for (const auto& row : t.rows) {
        bands.push_back(static_cast<int>(parse_long(row[0])));
        if (wavelengths_nm) wavelengths_nm->push_back(parse_double(row[1]));
    }
    return bands;
}

void write_ga_run_record(const std::string& path, const GaResult& result) {
    nlohmann::json j;
    j["config"] = {{"population", result.config.population},
                   {"generations", result.config.generations},
                   {"crossover_rate", result.config.crossover_rate},
                   {"mutation_rate", result.config.mutation_rate},
                   {"tournament_size", result.config.tournament_size},
                   {"elitism", result.config.elitism},
                   {"target_k", result.config.target_k},
                   {"size_penalty", result.config.size_penalty},
                   {"inner_max_lv", result.config.inner_max_lv},
                   {"seed", result.config.seed}};
    j["selected_bands"] = result.selected_bands;
    j["selected_wavelengths_nm"] = result.selected_wavelengths;
    j["best_fitness"] = result.best.fitness;
    j["trace"] = result.trace;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

} // namespace sforge
