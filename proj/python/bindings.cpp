#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rtsbs/experiment.hpp"
#include "rtsbs/synth.hpp"

namespace py = pybind11;
using namespace rtsbs;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Frame to_frame(const U8Array& a, int t) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw DimensionError("frame must be an HxWx3 uint8 array");
  Frame f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), t);
  std::copy_n(a.data(), f.data.size(), f.data.begin());
  return f;
}

SemanticMap to_map(const U8Array& a, int t) {
  if (a.ndim() != 2) throw DimensionError("semantic map must be an HxW uint8 array");
  SemanticMap m{static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), {}, t};
  m.probs.assign(a.data(), a.data() + a.size());
  return m;
}

template <typename T>
py::array_t<std::uint8_t> to_array(const Raster<T>& r) {
  py::array_t<std::uint8_t> out({r.height(), r.width()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < r.pixel_count(); ++i) dst[i] = static_cast<std::uint8_t>(r[i]);
  return out;
}

py::dict report_dict(const std::vector<VideoScore>& scores) {
  const ScoreReport report = make_report(scores);
  py::dict videos;
  for (const auto& [name, v] : report.per_video) videos[py::str(name)] = v;
  py::dict categories;
  for (const auto& [name, v] : report.per_category) categories[py::str(name)] = v;
  py::dict out;
  out["videos"] = videos;
  out["categories"] = categories;
  out["overall"] = report.overall;
  return out;
}

PipelineConfig make_config(const py::kwargs& kw) {
  PipelineConfig c;
  for (const auto& [k, v] : kw) {
    const auto key = py::str(k).cast<std::string>();
    std::string value;
    if (py::isinstance<py::bool_>(v)) {
      value = v.cast<bool>() ? "true" : "false";
    } else {
      value = py::str(v).cast<std::string>();
    }
    apply_setting(c, key, value);
  }
  return c;
}

class PyPipeline {
 public:
  PyPipeline(const PipelineConfig& config, const U8Array& first) : pipeline_(config, to_frame(first, 1)) {}

  py::dict process(const U8Array& frame, std::optional<U8Array> semantic, int t) {
    const Frame f = to_frame(frame, t);
    std::optional<SemanticMap> map;
    if (semantic) map = to_map(*semantic, t);
    const AvailabilityMask avail = pipeline_.availability(t);
    const bool available = any_available(avail);
    if (available && !map) throw ScheduleError("frame " + std::to_string(t) + ": semantics scheduled but none given");
    {
      py::gil_scoped_release release;
      pipeline_.process_into(f, available ? &*map : nullptr, avail, t, result_);
    }
    py::dict out;
    out["bgs"] = to_array(result_.bgs_mask);
    out["semantic"] = to_array(result_.semantic_mask);
    out["change"] = to_array(result_.change_mask);
    out["output"] = to_array(result_.output_mask);
    return out;
  }

  bool available(int t) const { return any_available(pipeline_.availability(t)); }
  const PipelineConfig& config() const { return pipeline_.config(); }

 private:
  Pipeline pipeline_;
  FrameResult result_;
};

}  // namespace

PYBIND11_MODULE(_rtsbs, m) {
  m.doc() = "Real-time semantic background subtraction";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ScheduleError>(m, "ScheduleError", PyExc_RuntimeError);
  py::register_exception<LayoutError>(m, "LayoutError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Label>(m, "Label").value("BG", Label::BG).value("FG", Label::FG);
  py::enum_<SemanticDecision>(m, "SemanticDecision")
      .value("BG", SemanticDecision::BG)
      .value("FG", SemanticDecision::FG)
      .value("DONT_KNOW", SemanticDecision::DontKnow);
  py::enum_<ChangeVerdict>(m, "ChangeVerdict")
      .value("NO_CHANGE", ChangeVerdict::NoChange)
      .value("CHANGE", ChangeVerdict::Change)
      .value("DONT_CARE", ChangeVerdict::DontCare);

  m.def(
      "classify_semantic",
      [](double p, double baseline, double tau_bg, double tau_fg) {
        return classify_semantic(p, baseline, SemanticParams{tau_bg, tau_fg});
      },
      py::arg("p"), py::arg("baseline"), py::arg("tau_bg") = 0.3, py::arg("tau_fg") = 0.3);
  m.def("combine_sbs", &combine_sbs, py::arg("b"), py::arg("s"));
  m.def("combine_rtsbs", &combine_rtsbs, py::arg("b"), py::arg("s"), py::arg("c"));
  m.def(
      "l1_distance",
      [](std::array<int, 3> a, std::array<int, 3> b) {
        auto rgb = [](const std::array<int, 3>& v) {
          for (int c : v) {
            if (c < 0 || c > 255) throw py::value_error("color components must be in [0, 255]");
          }
          return Rgb{static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
        };
        return l1_distance(rgb(a), rgb(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "f1", [](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) { return f1(Confusion{tp, fp, fn, 0}); },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), "None when there are no positives at all");

  py::class_<PipelineConfig>(m, "Config")
      .def(py::init(&make_config), "Keyword arguments use configuration file keys, e.g. mode='sbs', X=1")
      .def("set", [](PipelineConfig& c, const std::string& k, const std::string& v) { apply_setting(c, k, v); })
      .def_static("load", [](const std::filesystem::path& p) { return load_config(p); })
      .def("save", [](const PipelineConfig& c, const std::filesystem::path& p) { save_config(p, c); })
      .def_property_readonly("mode", [](const PipelineConfig& c) { return std::string(to_string(c.mode)); })
      .def_readwrite("x", &PipelineConfig::x)
      .def_readwrite("feedback", &PipelineConfig::feedback)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_property(
          "tau_bg", [](const PipelineConfig& c) { return c.semantic.tau_bg; },
          [](PipelineConfig& c, double v) { c.semantic.tau_bg = v; })
      .def_property(
          "tau_fg", [](const PipelineConfig& c) { return c.semantic.tau_fg; },
          [](PipelineConfig& c, double v) { c.semantic.tau_fg = v; })
      .def_property(
          "tau_star_bg", [](const PipelineConfig& c) { return c.change.tau_star_bg; },
          [](PipelineConfig& c, int v) { c.change.tau_star_bg = v; })
      .def_property(
          "tau_star_fg", [](const PipelineConfig& c) { return c.change.tau_star_fg; },
          [](PipelineConfig& c, int v) { c.change.tau_star_fg = v; })
      .def("__eq__", [](const PipelineConfig& a, const PipelineConfig& b) { return a == b; })
      .def("__repr__", [](const PipelineConfig& c) {
        std::ostringstream s;
        write_config(s, c);
        return s.str();
      });

  py::class_<PyPipeline>(m, "Pipeline")
      .def(py::init<const PipelineConfig&, const U8Array&>(), py::arg("config"), py::arg("first_frame"))
      .def("process", &PyPipeline::process, py::arg("frame"), py::arg("semantic") = py::none(), py::arg("t"),
           "Masks for frame t (1-based) as HxW uint8 arrays: bgs, semantic, change, output")
      .def("semantics_available", &PyPipeline::available, py::arg("t"))
      .def_property_readonly("config", &PyPipeline::config);

  m.def(
      "synth",
      [](const std::filesystem::path& out, int videos, std::uint64_t seed, int width, int height, int frames,
         int objects, double noise, double fidelity) {
        SuiteOptions o{videos, seed, width, height, frames, objects, noise, fidelity, 0.0};
        if (videos == 1) {
          synth(suite_specs(o).front().second, out, suite_render_seed(o, 0));
        } else {
          write_suite(o, out);
        }
      },
      py::arg("out"), py::arg("videos") = 1, py::arg("seed") = 100, py::arg("width") = 320, py::arg("height") = 240,
      py::arg("frames") = 100, py::arg("objects") = 2, py::arg("noise") = 8.0, py::arg("fidelity") = 0.9);

  m.def(
      "run",
      [](const std::filesystem::path& data, const PipelineConfig& config,
         const std::optional<std::filesystem::path>& out, int parallel) {
        const auto seqs = discover_dataset(data);
        std::vector<SequenceRun> runs;
        {
          py::gil_scoped_release release;
          runs = run_all(seqs, config, parallel, out);
        }
        std::vector<VideoScore> scores;
        int frames = 0;
        double compute = 0.0;
        for (const auto& r : runs) {
          scores.push_back(r.score);
          frames += r.frames;
          compute += r.compute_seconds;
        }
        py::dict d = report_dict(scores);
        d["frames"] = frames;
        d["compute_seconds"] = compute;
        return d;
      },
      py::arg("data"), py::arg("config"), py::arg("out") = py::none(), py::arg("parallel") = 1);

  m.def(
      "evaluate",
      [](const std::filesystem::path& data, const std::filesystem::path& masks) {
        std::vector<VideoScore> scores;
        for (const auto& s : discover_dataset(data)) scores.push_back(evaluate_masks(s, masks / mask_subdir(s)));
        return report_dict(scores);
      },
      py::arg("data"), py::arg("masks"));
}
