#include "sforge/pipeline.hpp"

#include "sforge/calibration.hpp"
#include "sforge/color.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/ga_select.hpp"
#include "sforge/metrics.hpp"
#include "sforge/plot.hpp"
#include "sforge/plsr.hpp"
#include "sforge/png_io.hpp"
#include "sforge/recon_net.hpp"
#include "sforge/segmentation.hpp"
#include "sforge/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace fs = std::filesystem;

namespace sforge {

std::string sample_basename(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%04d", index);
    return buf;
}

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

// -- dataset access -----------------------------------------------------------

// ENVI headers carry no product kind; stage outputs under calibrated/,
// selected/ and recon/ are reflectance by construction.
Hypercube load_reflectance(const std::string& path_base) {
    Hypercube cube = load_cube(path_base);
    cube.kind = CubeKind::reflectance;
    return cube;
}

std::map<std::string, double> read_latents(const std::string& data_dir) {
    const CsvTable t = read_csv(join(data_dir, "latents.csv"));
    std::map<std::string, double> out;
    for (const auto& row : t.rows) out[row[0]] = parse_double(row[1]);
    return out;
}

// Pixel-level validity stored as PNG; expanded to element level on use.
std::vector<std::uint8_t> element_valid(const BinaryMask& pixel_valid, int bands) {
    std::vector<std::uint8_t> out(pixel_valid.data.size() * bands, 1);
    for (std::size_t p = 0; p < pixel_valid.data.size(); ++p)
        if (!pixel_valid.data[p])
            std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(p) * bands, bands,
                        std::uint8_t{0});
    return out;
}

struct SplitTable {
    SplitIndices indices;
    std::vector<std::string> ids; // row order of the spectra table
};

void write_split_csv(const std::string& path, const SplitTable& split) {
    CsvTable t;
    t.header = {"sample_id", "subset"};
    std::vector<std::string> subset(split.ids.size());
    for (int i : split.indices.calibration) subset[i] = "calibration";
    for (int i : split.indices.validation) subset[i] = "validation";
    for (int i : split.indices.prediction) subset[i] = "prediction";
    for (std::size_t i = 0; i < split.ids.size(); ++i)
        t.rows.push_back({split.ids[i], subset[i]});
    write_csv(path, t);
}

SplitTable read_split_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    SplitTable split;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        split.ids.push_back(t.rows[i][0]);
        const std::string& subset = t.rows[i][1];
        if (subset == "calibration")
            split.indices.calibration.push_back(static_cast<int>(i));
        else if (subset == "validation")
            split.indices.validation.push_back(static_cast<int>(i));
        else if (subset == "prediction")
            split.indices.prediction.push_back(static_cast<int>(i));
        else
            throw ParseError(path + ": unknown subset " + subset);
    }
    return split;
}

struct SpectraSet {
    std::vector<SampleSpectrum> samples;
    std::vector<double> wavelengths;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

SpectraSet load_spectra_set(const std::string& spectra_csv,
                            const std::string& data_dir) {
    SpectraSet set;
    auto [samples, wavelengths] = read_spectra_csv(spectra_csv);
    set.samples = std::move(samples);
    set.wavelengths = std::move(wavelengths);
    const auto latents = read_latents(data_dir);
    set.X.resize(static_cast<Eigen::Index>(set.samples.size()),
                 static_cast<Eigen::Index>(set.wavelengths.size()));
    set.y.resize(static_cast<Eigen::Index>(set.samples.size()));
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const auto it = latents.find(set.samples[i].sample_id);
        if (it == latents.end())
            throw ParseError("no reference value for sample " +
                             set.samples[i].sample_id);
        set.y(static_cast<Eigen::Index>(i)) = it->second;
        for (std::size_t b = 0; b < set.wavelengths.size(); ++b)
            set.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) =
                set.samples[i].spectrum[b];
    }
    return set;
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
    return out;
}

Eigen::VectorXd elems_of(const Eigen::VectorXd& y, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(idx[i]);
    return out;
}

void write_plsr_table_csv(const std::string& path, const PlsrTableRow& row) {
    CsvTable t;
    t.header = {"table", "LV", "R2c", "RMSEC", "R2v", "RMSEV", "R2p", "RMSEP", "RPD"};
    t.rows.push_back({row.table, std::to_string(row.lv), fmt_g10(row.r2c),
                      fmt_g10(row.rmsec), fmt_g10(row.r2v), fmt_g10(row.rmsev),
                      fmt_g10(row.r2p), fmt_g10(row.rmsep), fmt_g10(row.rpd)});
    write_csv(path, t);
}

PlsrTableRow read_plsr_table_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.rows.size() != 1 || t.rows[0].size() != 9)
        throw ParseError(path + ": expected one PLSR table row");
    const auto& r = t.rows[0];
    PlsrTableRow row;
    row.table = r[0];
    row.lv = static_cast<int>(parse_long(r[1]));
    row.r2c = parse_double(r[2]);
    row.rmsec = parse_double(r[3]);
    row.r2v = parse_double(r[4]);
    row.rmsev = parse_double(r[5]);
    row.r2p = parse_double(r[6]);
    row.rmsep = parse_double(r[7]);
    row.rpd = parse_double(r[8]);
    return row;
}

Tensor rgb_png_to_tensor(const std::string& path) {
    const RgbImage img = read_rgb_png(path);
    Tensor t;
    t.height = img.height;
    t.width = img.width;
    t.channels = 3;
    t.v = rgb_to_unit(img);
    return t;
}

Tensor cube_to_tensor(const Hypercube& cube) {
    Tensor t;
    t.height = cube.height;
    t.width = cube.width;
    t.channels = cube.bands;
    t.v = cube.data; // identical channel-last layout
    return t;
}

} // namespace

std::vector<std::string> read_manifest_ids(const std::string& data_dir) {
    const CsvTable t = read_csv(join(data_dir, "manifest.csv"));
    std::vector<std::string> ids;
    for (const auto& row : t.rows) ids.push_back(row[0]);
    return ids;
}

PlsrTableRow fit_plsr_table(const std::string& name, const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& y, const SplitIndices& split,
                            int max_lv_cap, PlsrModel* fitted) {
    const Eigen::MatrixXd Xc = rows_of(X, split.calibration);
    const Eigen::VectorXd yc = elems_of(y, split.calibration);

    const int max_lv = std::min<int>(
        {max_lv_cap, static_cast<int>(Xc.rows()) - 2, static_cast<int>(Xc.cols())});
    if (max_lv < 1) throw BadConfig("calibration set too small for LOOCV");
    const LvSelection sel = select_lv_loocv(Xc, yc, max_lv);
    const PlsrModel model = plsr_fit(Xc, yc, sel.best_lv);

    PlsrTableRow row;
    row.table = name;
    row.lv = sel.best_lv;
    const RegressionReport cal = regression_report(yc, plsr_predict(model, Xc));
    row.r2c = cal.r2;
    row.rmsec = cal.rmse;
    const Eigen::MatrixXd Xv = rows_of(X, split.validation);
    const Eigen::VectorXd yv = elems_of(y, split.validation);
    const RegressionReport val = regression_report(yv, plsr_predict(model, Xv));
    row.r2v = val.r2;
    row.rmsev = val.rmse;
    const Eigen::MatrixXd Xp = rows_of(X, split.prediction);
    const Eigen::VectorXd yp = elems_of(y, split.prediction);
    const RegressionReport pred = regression_report(yp, plsr_predict(model, Xp));
    row.r2p = pred.r2;
    row.rmsep = pred.rmse;
    row.rpd = rpd(yp, pred.rmse);
    if (fitted) *fitted = model;
    return row;
}

// -- stages -------------------------------------------------------------------

void stage_synth(const PipelineConfig& cfg) {
    ensure_dir(cfg.data_dir);
    const SyntheticDataset ds = generate_synthetic_scene(cfg.synth);
    save_cube(join(cfg.data_dir, "white"), ds.white);
    save_cube(join(cfg.data_dir, "dark"), ds.dark);

    CsvTable manifest, latents;
    manifest.header = {"sample_id", "raw", "truth", "gtmask"};
    latents.header = {"sample_id", "latent"};
    for (const SyntheticScene& scene : ds.scenes) {
        save_cube(join(cfg.data_dir, scene.sample_id + "_raw"), scene.raw);
        save_cube(join(cfg.data_dir, scene.sample_id + "_truth"), scene.truth);
        BinaryMask gt;
        gt.height = scene.truth.height;
        gt.width = scene.truth.width;
        gt.data = scene.object_mask;
        gt.true_count = 0;
        for (auto v : gt.data) gt.true_count += v ? 1 : 0;
        write_mask_png(join(cfg.data_dir, scene.sample_id + "_gtmask.png"), gt);
        manifest.rows.push_back({scene.sample_id, scene.sample_id + "_raw",
                                 scene.sample_id + "_truth",
                                 scene.sample_id + "_gtmask.png"});
        latents.rows.push_back({scene.sample_id, fmt_g17(scene.latent)});
    }
    write_csv(join(cfg.data_dir, "manifest.csv"), manifest);
    write_csv(join(cfg.data_dir, "latents.csv"), latents);
}

void stage_calibrate(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const std::string out = join(cfg.out_dir, "calibrated");
    ensure_dir(out);
    ReferenceFrames refs;
    refs.white = load_cube(join(cfg.data_dir, "white"));
    refs.dark = load_cube(join(cfg.data_dir, "dark"));
    refs.epsilon = cfg.calibration_epsilon;

    for (const std::string& id : ids) {
        const Hypercube raw = load_cube(join(cfg.data_dir, id + "_raw"));
        const CalibrationResult cal =
            calibrate_reflectance(raw, refs, cfg.calibration_r_max);
        save_cube(join(out, id + "_refl"), cal.reflectance);

        // Collapse element validity to pixel level for the stage file.
        BinaryMask pixel_valid;
        pixel_valid.height = raw.height;
        pixel_valid.width = raw.width;
        pixel_valid.data.assign(raw.pixel_count(), 1);
        for (std::size_t p = 0; p < raw.pixel_count(); ++p)
            for (int b = 0; b < raw.bands; ++b)
                if (!cal.valid[p * raw.bands + b]) {
                    pixel_valid.data[p] = 0;
                    break;
                }
        pixel_valid.true_count = 0;
        for (auto v : pixel_valid.data) pixel_valid.true_count += v ? 1 : 0;
        write_mask_png(join(out, id + "_valid.png"), pixel_valid);
    }
}

void stage_mask(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const std::string cal_dir = join(cfg.out_dir, "calibrated");
    const std::string out = join(cfg.out_dir, "masks");
    ensure_dir(out);
    for (const std::string& id : ids) {
        const Hypercube refl = load_reflectance(join(cal_dir, id + "_refl"));
        const BinaryMask pixel_valid = read_mask_png(join(cal_dir, id + "_valid.png"));
        const BinaryMask mask =
            band_difference_mask(refl, element_valid(pixel_valid, refl.bands),
                                 cfg.segmentation_hi_nm, cfg.segmentation_lo_nm);
        write_mask_png(join(out, id + "_mask.png"), mask);
    }
}

void stage_extract(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const std::string cal_dir = join(cfg.out_dir, "calibrated");
    const std::string mask_dir = join(cfg.out_dir, "masks");
    const std::string out = join(cfg.out_dir, "spectra");
    ensure_dir(out);

    std::vector<std::pair<std::string, std::vector<double>>> raw_spectra;
    std::vector<double> wavelengths;
    for (const std::string& id : ids) {
        const Hypercube refl = load_reflectance(join(cal_dir, id + "_refl"));
        const BinaryMask pixel_valid = read_mask_png(join(cal_dir, id + "_valid.png"));
        const BinaryMask mask = read_mask_png(join(mask_dir, id + "_mask.png"));
        raw_spectra.emplace_back(
            id, mean_roi_spectrum(refl, mask, element_valid(pixel_valid, refl.bands)));
        wavelengths = refl.wavelengths_nm;
    }
    const std::vector<SampleSpectrum> averaged = average_replicates(raw_spectra);
    write_spectra_csv(join(out, "spectra_full.csv"), averaged, wavelengths);

    SplitTable split;
    for (const auto& s : averaged) split.ids.push_back(s.sample_id);
    split.indices =
        random_split(static_cast<int>(averaged.size()), cfg.split.cal_ratio,
                     cfg.split.val_ratio, cfg.split.pred_ratio, cfg.split.seed);
    write_split_csv(join(cfg.out_dir, "split.csv"), split);
}

void stage_plsr_full(const PipelineConfig& cfg) {
    const SpectraSet set =
        load_spectra_set(join(cfg.out_dir, "spectra/spectra_full.csv"), cfg.data_dir);
    const SplitTable split = read_split_csv(join(cfg.out_dir, "split.csv"));

    // Preprocess: fit on the calibration block only, apply everywhere.
    const Eigen::MatrixXd Xcal = rows_of(set.X, split.indices.calibration);
    const PreprocessModel pre = fit_preprocess(cfg.preprocess, Xcal, set.wavelengths);
    const Eigen::MatrixXd Xp = apply_preprocess(pre, set.X);

    const std::string model_dir = join(cfg.out_dir, "models");
    ensure_dir(model_dir);
    PlsrModel model;
    const PlsrTableRow row = fit_plsr_table("full_spectrum", Xp, set.y, split.indices,
                                            cfg.split.max_lv, &model);
    save_plsr_model(join(model_dir, "plsr_full.plsr1"), model);
    write_plsr_table_csv(join(cfg.out_dir, "plsr_full.csv"), row);
}

void stage_select(const PipelineConfig& cfg) {
    const SpectraSet set =
        load_spectra_set(join(cfg.out_dir, "spectra/spectra_full.csv"), cfg.data_dir);
    const SplitTable split = read_split_csv(join(cfg.out_dir, "split.csv"));
    const std::string out = join(cfg.out_dir, "ga");
    ensure_dir(out);

    // GA fitness sees the raw calibration block only: no preprocessing (so
    // selected indices map straight onto cube bands) and no val/pred rows.
    const Eigen::MatrixXd Xcal = rows_of(set.X, split.indices.calibration);
    const Eigen::VectorXd ycal = elems_of(set.y, split.indices.calibration);
    const GaResult result = ga_select(Xcal, ycal, set.wavelengths, cfg.ga);
    write_selected_bands_csv(join(out, "selected_bands.csv"), result);
    write_ga_run_record(join(out, "ga_run.json"), result);

    PlotSeries trace;
    trace.label = "BEST RMSECV";
    for (std::size_t g = 0; g < result.trace.size(); ++g) {
        trace.x.push_back(static_cast<double>(g));
        trace.y.push_back(result.trace[g]);
    }
    PlotOptions opt;
    opt.title = "GA FITNESS TRACE";
    opt.x_label = "GENERATION";
    opt.y_label = "RMSECV";
    render_line_plot(join(out, "ga_trace.png"), {trace}, opt);
}

void stage_render(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const std::string cal_dir = join(cfg.out_dir, "calibrated");
    const std::string mask_dir = join(cfg.out_dir, "masks");
    const std::string sel_dir = join(cfg.out_dir, "selected");
    const std::string rgb_dir = join(cfg.out_dir, "rgb");
    ensure_dir(sel_dir);
    ensure_dir(rgb_dir);

    const std::vector<int> bands =
        read_selected_bands_csv(join(cfg.out_dir, "ga/selected_bands.csv"));
    ColorTables tables = ColorTables::standard();
    tables.gamma = cfg.gamma;

    for (const std::string& id : ids) {
        const Hypercube refl = load_reflectance(join(cal_dir, id + "_refl"));
        save_cube(join(sel_dir, id + "_sel"), extract_bands(refl, bands));

        RgbImage rgb = render_rgb(refl, tables);
        const BinaryMask mask = read_mask_png(join(mask_dir, id + "_mask.png"));
        mask_rgb(rgb, mask);
        write_rgb_png(join(rgb_dir, id + ".png"), rgb);
    }
}

void stage_train(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const SplitTable split = read_split_csv(join(cfg.out_dir, "split.csv"));
    const std::string model_dir = join(cfg.out_dir, "models");
    ensure_dir(model_dir);

    std::vector<double> wavelengths;
    read_selected_bands_csv(join(cfg.out_dir, "ga/selected_bands.csv"), &wavelengths);

    // The reconstruction model is fit on calibration scenes only.
    std::vector<PatchPair> dataset;
    for (int idx : split.indices.calibration) {
        const std::string& id = split.ids[idx];
        PatchPair pair;
        pair.rgb = rgb_png_to_tensor(join(cfg.out_dir, "rgb/" + id + ".png"));
        pair.gt = cube_to_tensor(load_cube(join(cfg.out_dir, "selected/" + id + "_sel")));
        dataset.push_back(std::move(pair));
    }
    (void)ids;

    NetworkConfig net = cfg.network;
    net.out_bands = static_cast<int>(wavelengths.size());
    const TrainResult result = train(dataset, net, cfg.train);
    save_checkpoint(join(model_dir, "recon.hsdn1"), result.best_params, wavelengths);
    write_training_trace_csv(join(model_dir, "train_trace.csv"), result);

    PlotSeries trace;
    trace.label = "TRAIN MRAE";
    for (std::size_t e = 0; e < result.trace.size(); ++e) {
        trace.x.push_back(static_cast<double>(e + 1));
        trace.y.push_back(result.trace[e]);
    }
    PlotOptions opt;
    opt.title = "TRAINING MRAE";
    opt.x_label = "EPOCH";
    opt.y_label = "MRAE";
    render_line_plot(join(model_dir, "train_trace.png"), {trace}, opt);
}

void stage_reconstruct(const PipelineConfig& cfg) {
    const auto ids = read_manifest_ids(cfg.data_dir);
    const std::string out = join(cfg.out_dir, "recon");
    ensure_dir(out);
    const auto [params, wavelengths] =
        load_checkpoint(join(cfg.out_dir, "models/recon.hsdn1"));
    for (const std::string& id : ids) {
        const Tensor rgb = rgb_png_to_tensor(join(cfg.out_dir, "rgb/" + id + ".png"));
        const Hypercube rc = reconstruct(params, rgb, wavelengths);
        save_cube(join(out, id + "_rc"), rc);
    }
}

void stage_evaluate(const PipelineConfig& cfg) {
    const SplitTable split = read_split_csv(join(cfg.out_dir, "split.csv"));
    const std::string mask_dir = join(cfg.out_dir, "masks");

    // Reconstruction metrics per split, pooled over ROI elements only
    // (background pixels never reach the downstream spectra).
    CsvTable metrics;
    metrics.header = {"split", "mrae", "rmse", "psnr_db", "n_elements"};
    const struct {
        const char* name;
        const std::vector<int>* idx;
    } blocks[] = {{"calibration", &split.indices.calibration},
                  {"validation", &split.indices.validation},
                  {"prediction", &split.indices.prediction}};
    for (const auto& block : blocks) {
        std::vector<double> rc_elems, gt_elems;
        for (int idx : *block.idx) {
            const std::string& id = split.ids[idx];
            const Hypercube gt = load_cube(join(cfg.out_dir, "selected/" + id + "_sel"));
            const Hypercube rc = load_cube(join(cfg.out_dir, "recon/" + id + "_rc"));
            const BinaryMask mask = read_mask_png(join(mask_dir, id + "_mask.png"));
            if (gt.size() != rc.size())
                throw ShapeMismatch("recon/gt cube shapes differ for " + id);
            for (std::size_t p = 0; p < gt.pixel_count(); ++p) {
                if (!mask.data[p]) continue;
                for (int b = 0; b < gt.bands; ++b) {
                    gt_elems.push_back(gt.data[p * gt.bands + b]);
                    rc_elems.push_back(rc.data[p * rc.bands + b]);
                }
            }
        }
        const double m = mrae(rc_elems, gt_elems, cfg.evaluate.mrae_floor);
        const double r = rmse_metric(rc_elems, gt_elems);
        const double p = psnr(rc_elems, gt_elems, cfg.evaluate.psnr_peak);
        metrics.rows.push_back({block.name, fmt_g10(m), fmt_g10(r),
                                std::isinf(p) ? "inf" : fmt_g10(p),
                                std::to_string(gt_elems.size())});
    }
    write_csv(join(cfg.out_dir, "recon_metrics.csv"), metrics);

    // Re-extract spectra from the reconstructions (ROI means, same masks).
    const auto ids = read_manifest_ids(cfg.data_dir);
    std::vector<std::pair<std::string, std::vector<double>>> recon_spectra;
    std::vector<double> sel_wavelengths;
    for (const std::string& id : ids) {
        const Hypercube rc = load_cube(join(cfg.out_dir, "recon/" + id + "_rc"));
        const BinaryMask mask = read_mask_png(join(mask_dir, id + "_mask.png"));
        recon_spectra.emplace_back(id, mean_roi_spectrum(rc, mask));
        sel_wavelengths = rc.wavelengths_nm;
    }
    write_spectra_csv(join(cfg.out_dir, "spectra/spectra_recon.csv"),
                      average_replicates(recon_spectra), sel_wavelengths);

    // PLSR on ground-truth-selected spectra: column subset of the full table.
    const SpectraSet full =
        load_spectra_set(join(cfg.out_dir, "spectra/spectra_full.csv"), cfg.data_dir);
    const std::vector<int> bands =
        read_selected_bands_csv(join(cfg.out_dir, "ga/selected_bands.csv"));
    Eigen::MatrixXd Xsel(full.X.rows(), static_cast<Eigen::Index>(bands.size()));
    for (std::size_t j = 0; j < bands.size(); ++j)
        Xsel.col(static_cast<Eigen::Index>(j)) = full.X.col(bands[j]);
    write_plsr_table_csv(
        join(cfg.out_dir, "plsr_gt_selected.csv"),
        fit_plsr_table("gt_selected", Xsel, full.y, split.indices, cfg.split.max_lv));

    // PLSR on reconstructed spectra.
    const SpectraSet recon =
        load_spectra_set(join(cfg.out_dir, "spectra/spectra_recon.csv"), cfg.data_dir);
    write_plsr_table_csv(join(cfg.out_dir, "plsr_recon_selected.csv"),
                         fit_plsr_table("recon_selected", recon.X, recon.y,
                                        split.indices, cfg.split.max_lv));
}

RunReport stage_report(const PipelineConfig& cfg) {
    RunReport report;
    report.plsr_tables.push_back(
        read_plsr_table_csv(join(cfg.out_dir, "plsr_full.csv")));
    report.plsr_tables.push_back(
        read_plsr_table_csv(join(cfg.out_dir, "plsr_gt_selected.csv")));
    report.plsr_tables.push_back(
        read_plsr_table_csv(join(cfg.out_dir, "plsr_recon_selected.csv")));

    const CsvTable metrics = read_csv(join(cfg.out_dir, "recon_metrics.csv"));
    for (const auto& r : metrics.rows) {
        ReconMetricsRow row;
        row.split = r[0];
        row.mrae = parse_double(r[1]);
        row.rmse = parse_double(r[2]);
        row.psnr = r[3] == "inf" ? std::numeric_limits<double>::infinity()
                                 : parse_double(r[3]);
        row.n_elements = static_cast<std::size_t>(parse_long(r[4]));
        report.recon_metrics.push_back(row);
    }
    report.selected_bands = read_selected_bands_csv(
        join(cfg.out_dir, "ga/selected_bands.csv"), &report.selected_wavelengths);

    // Assembled CSV: the three PLSR tables in Table-1/3 column layout.
    CsvTable all;
    all.header = {"table", "LV", "R2c", "RMSEC", "R2v", "RMSEV", "R2p", "RMSEP", "RPD"};
    for (const auto& row : report.plsr_tables)
        all.rows.push_back({row.table, std::to_string(row.lv), fmt_g10(row.r2c),
                            fmt_g10(row.rmsec), fmt_g10(row.r2v), fmt_g10(row.rmsev),
                            fmt_g10(row.r2p), fmt_g10(row.rmsep), fmt_g10(row.rpd)});
    write_csv(join(cfg.out_dir, "report.csv"), all);

    // Human-readable twin.
    std::ofstream txt(join(cfg.out_dir, "report.txt"));
    if (!txt) throw IoError("cannot write report.txt");
    txt << "sforge run report\n=================\n\n";
    txt << "seeds: synthetic=" << cfg.synth.seed << " split=" << cfg.split.seed
        << " ga=" << cfg.ga.seed << " train=" << cfg.train.seed << "\n\n";
    txt << "selected wavelengths (nm):";
    for (double wl : report.selected_wavelengths) txt << ' ' << fmt_f4(wl);
    txt << "\n\nPLSR models\n";
    txt << "  table            LV   R2c     RMSEC   R2v     RMSEV   R2p     RMSEP   RPD\n";
    for (const auto& row : report.plsr_tables) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "  %-16s %2d   %-7.4f %-7.4f %-7.4f %-7.4f %-7.4f %-7.4f %-7.4f\n",
                      row.table.c_str(), row.lv, row.r2c, row.rmsec, row.r2v, row.rmsev,
                      row.r2p, row.rmsep, row.rpd);
        txt << line;
    }
    txt << "\nreconstruction metrics (ROI elements)\n";
    txt << "  split        MRAE     RMSE     PSNR(dB)   n\n";
    for (const auto& row : report.recon_metrics) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-12s %-8.4f %-8.4f %-10.4f %zu\n",
                      row.split.c_str(), row.mrae, row.rmse, row.psnr, row.n_elements);
        txt << line;
    }
    return report;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
    using clock = std::chrono::steady_clock;
    RunReport report;
    const struct {
        const char* name;
        void (*fn)(const PipelineConfig&);
    } stages[] = {
        {"synth", stage_synth},         {"calibrate", stage_calibrate},
        {"mask", stage_mask},           {"extract", stage_extract},
        {"plsr_full", stage_plsr_full}, {"select", stage_select},
        {"render", stage_render},       {"train", stage_train},
        {"reconstruct", stage_reconstruct}, {"evaluate", stage_evaluate},
    };
    ensure_dir(cfg.out_dir);
    for (const auto& stage : stages) {
        const auto t0 = clock::now();
        try {
            stage.fn(cfg);
        } catch (const Error& e) {
            throw StageError(std::string(stage.name) + ": " + e.what());
        }
        const double secs =
            std::chrono::duration<double>(clock::now() - t0).count();
        report.timings_s.emplace_back(stage.name, secs);
    }
    const auto t0 = clock::now();
    RunReport assembled = stage_report(cfg);
    report.timings_s.emplace_back(
        "report", std::chrono::duration<double>(clock::now() - t0).count());
    assembled.timings_s = report.timings_s;

    // Wall-clock timings live apart from the deterministic outputs.
    CsvTable timings;
    timings.header = {"stage", "seconds"};
    for (const auto& [name, secs] : assembled.timings_s)
        timings.rows.push_back({name, fmt_g10(secs)});
    write_csv(join(cfg.out_dir, "timings.csv"), timings);
    return assembled;
}

} // namespace sforge
