// Python bindings for the core pipeline: projection, segmentation,
// imputation, daily features, evaluation helpers and the analytic model.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mobimpute/analytic.hpp"
#include "mobimpute/evaluation.hpp"
#include "mobimpute/features.hpp"
#include "mobimpute/imputer.hpp"
#include "mobimpute/io.hpp"
#include "mobimpute/segmentation.hpp"

namespace py = pybind11;
using namespace mobimpute;

PYBIND11_MODULE(_mobimpute, m) {
    m.doc() = "GPS trajectory imputation and mobility features";

    py::class_<GpsRecord>(m, "GpsRecord")
        .def(py::init<>())
        .def(py::init([](double t, double lat, double lon) {
                 return GpsRecord{t, lat, lon, -1.0};
             }),
             py::arg("t"), py::arg("lat"), py::arg("lon"))
        .def_readwrite("t", &GpsRecord::t)
        .def_readwrite("lat", &GpsRecord::lat)
        .def_readwrite("lon", &GpsRecord::lon)
        .def_readwrite("accuracy", &GpsRecord::accuracy);

    py::class_<PlanarPoint>(m, "PlanarPoint")
        .def(py::init<>())
        .def(py::init([](double x, double y, double t) {
                 return PlanarPoint{x, y, t};
             }),
             py::arg("x"), py::arg("y"), py::arg("t"))
        .def_readwrite("x", &PlanarPoint::x)
        .def_readwrite("y", &PlanarPoint::y)
        .def_readwrite("t", &PlanarPoint::t);

    py::class_<ProjectionFrame>(m, "ProjectionFrame")
        .def_readonly("lat_min", &ProjectionFrame::lat_min)
        .def_readonly("lat_max", &ProjectionFrame::lat_max)
        .def_readonly("lon_min", &ProjectionFrame::lon_min)
        .def_readonly("lon_max", &ProjectionFrame::lon_max)
        .def_readonly("d1", &ProjectionFrame::d1)
        .def_readonly("d2", &ProjectionFrame::d2)
        .def_readonly("d3", &ProjectionFrame::d3);

    m.def("build_frame", [](const std::vector<GpsRecord>& recs) { return build_frame(recs); });
    m.def("project", &project);
    m.def("project_all",
          [](const std::vector<GpsRecord>& recs, const ProjectionFrame& f) {
              return project_all(recs, f);
          });
    m.def("planar_distance", &planar_distance);

    py::enum_<EventKind>(m, "EventKind")
        .value("Flight", EventKind::Flight)
        .value("Pause", EventKind::Pause);

    py::class_<Event>(m, "Event")
        .def(py::init<>())
        .def_readwrite("kind", &Event::kind)
        .def_readwrite("x", &Event::x)
        .def_readwrite("y", &Event::y)
        .def_readwrite("t", &Event::t)
        .def_readwrite("dx", &Event::dx)
        .def_readwrite("dy", &Event::dy)
        .def_readwrite("dt", &Event::dt)
        .def_readwrite("observed", &Event::observed)
        .def("length", &Event::length)
        .def("x_end", &Event::x_end)
        .def("y_end", &Event::y_end)
        .def("t_end", &Event::t_end);

    py::class_<MissingInterval>(m, "MissingInterval")
        .def(py::init<>())
        .def_readwrite("t_start", &MissingInterval::t_start)
        .def_readwrite("t_end", &MissingInterval::t_end)
        .def_readwrite("anchor_start", &MissingInterval::anchor_start)
        .def_readwrite("anchor_end", &MissingInterval::anchor_end)
        .def("duration", &MissingInterval::duration);

    py::class_<SegmentationConfig>(m, "SegmentationConfig")
        .def(py::init<>())
        .def_readwrite("pause_radius_m", &SegmentationConfig::pause_radius_m)
        .def_readwrite("min_pause_s", &SegmentationConfig::min_pause_s)
        .def_readwrite("gap_threshold_s", &SegmentationConfig::gap_threshold_s)
        .def_readwrite("pause_merge_m", &SegmentationConfig::pause_merge_m);

    py::class_<MobilityTrace>(m, "MobilityTrace")
        .def(py::init<>())
        .def_readwrite("subject_id", &MobilityTrace::subject_id)
        .def_readwrite("events", &MobilityTrace::events)
        .def_readwrite("gaps", &MobilityTrace::gaps)
        .def("t_first", &MobilityTrace::t_first)
        .def("t_last", &MobilityTrace::t_last)
        .def("missing_seconds", &MobilityTrace::missing_seconds);

    m.def(
        "extract_events",
        [](const std::vector<PlanarPoint>& pts, const SegmentationConfig& cfg, bool merge) {
            auto tr = extract_events(pts, cfg);
            if (merge) tr = merge_pause_flanked_gaps(tr, cfg);
            return tr;
        },
        py::arg("points"), py::arg("config") = SegmentationConfig{}, py::arg("merge") = true);

    py::enum_<KernelFamily>(m, "KernelFamily")
        .value("TL", KernelFamily::TL)
        .value("GL", KernelFamily::GL)
        .value("GLC", KernelFamily::GLC)
        .value("LI", KernelFamily::LI);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init<>())
        .def_readwrite("family", &KernelSpec::family)
        .def_readwrite("nu", &KernelSpec::nu)
        .def_readwrite("c", &KernelSpec::c)
        .def_readwrite("c1", &KernelSpec::c1)
        .def_readwrite("c2", &KernelSpec::c2)
        .def_static("make", &KernelSpec::make, py::arg("family"), py::arg("nu") = 1.0,
                    py::arg("scale_multiplier") = 1.0);

    m.def("t_density", &t_density, py::arg("u"), py::arg("nu"));
    m.def("kernel_weight", &weight, py::arg("spec"), py::arg("z_new"), py::arg("donor"));

    m.def("impute_trace", &impute_trace, py::arg("trace"), py::arg("spec"),
          py::arg("replicates"), py::arg("seed"));
    m.def("confidence_interval", &confidence_interval, py::arg("values"), py::arg("alpha"));

    py::class_<FeatureConfig>(m, "FeatureConfig")
        .def(py::init<>())
        .def_readwrite("home_radius_m", &FeatureConfig::home_radius_m)
        .def_readwrite("sigloc_radius_m", &FeatureConfig::sigloc_radius_m)
        .def_readwrite("sigloc_min_s", &FeatureConfig::sigloc_min_s)
        .def_readwrite("tz_offset_s", &FeatureConfig::tz_offset_s);

    py::class_<SignificantLocation>(m, "SignificantLocation")
        .def_readonly("id", &SignificantLocation::id)
        .def_readonly("x", &SignificantLocation::x)
        .def_readonly("y", &SignificantLocation::y)
        .def_readonly("total_pause_s", &SignificantLocation::total_pause_s)
        .def_readonly("night_pause_s", &SignificantLocation::night_pause_s)
        .def_readonly("is_home", &SignificantLocation::is_home);

    py::class_<DailyFeatureVector>(m, "DailyFeatureVector")
        .def_readonly("day_start", &DailyFeatureVector::day_start)
        .def_readonly("hometime_min", &DailyFeatureVector::hometime_min)
        .def_readonly("dist_travelled_m", &DailyFeatureVector::dist_travelled_m)
        .def_readonly("rog_m", &DailyFeatureVector::rog_m)
        .def_readonly("max_diam_m", &DailyFeatureVector::max_diam_m)
        .def_readonly("max_home_dist_m", &DailyFeatureVector::max_home_dist_m)
        .def_readonly("sig_locs_visited", &DailyFeatureVector::sig_locs_visited)
        .def_readonly("avg_flight_len_m", &DailyFeatureVector::avg_flight_len_m)
        .def_readonly("std_flight_len_m", &DailyFeatureVector::std_flight_len_m)
        .def_readonly("avg_flight_dur_s", &DailyFeatureVector::avg_flight_dur_s)
        .def_readonly("std_flight_dur_s", &DailyFeatureVector::std_flight_dur_s)
        .def_readonly("frac_pause", &DailyFeatureVector::frac_pause)
        .def_readonly("sig_loc_entropy", &DailyFeatureVector::sig_loc_entropy)
        .def_readonly("mins_missing", &DailyFeatureVector::mins_missing)
        .def_readonly("circdn_rtn", &DailyFeatureVector::circdn_rtn)
        .def_readonly("wkend_day_rtn", &DailyFeatureVector::wkend_day_rtn)
        .def_readonly("lo", &DailyFeatureVector::lo)
        .def_readonly("hi", &DailyFeatureVector::hi)
        .def("as_vector", &DailyFeatureVector::as_vector)
        .def_static("measure_names", &DailyFeatureVector::measure_names);

    m.def("find_significant_locations",
          [](const std::vector<MobilityTrace>& traces, const FeatureConfig& cfg) {
              return find_significant_locations(traces, cfg);
          });
    m.def("compute_daily_features",
          [](const MobilityTrace& trace, double day_start,
             std::vector<SignificantLocation> locations, const FeatureConfig& cfg,
             double mins_missing) {
              FeatureConfig c = cfg;
              const auto home_idx = estimate_home(locations, c);
              const SignificantLocation* home =
                  home_idx < locations.size() ? &locations[home_idx] : nullptr;
              return compute_daily_features(trace, day_start, locations, home, c, mins_missing);
          },
          py::arg("trace"), py::arg("day_start"), py::arg("locations"),
          py::arg("config") = FeatureConfig{}, py::arg("mins_missing") = 0.0);
    m.def("trace_measures", &trace_measures);
    m.def("trace_measure_names", &trace_measure_names, py::return_value_policy::copy);

    py::class_<OnOffSchedule>(m, "OnOffSchedule")
        .def(py::init<>())
        .def_readwrite("on_s", &OnOffSchedule::on_s)
        .def_readwrite("off_s", &OnOffSchedule::off_s)
        .def_readwrite("phase_s", &OnOffSchedule::phase_s)
        .def("cycle_s", &OnOffSchedule::cycle_s);

    m.def("impose_missingness",
          [](const std::vector<PlanarPoint>& pts, const OnOffSchedule& s) {
              return impose_missingness(pts, s);
          });
    m.def("unscheduled_missingness",
          [](const std::vector<PlanarPoint>& pts, const OnOffSchedule& s, double tol) {
              return unscheduled_missingness(pts, s, tol);
          },
          py::arg("points"), py::arg("schedule"), py::arg("tolerance_s") = 60.0);
    m.def("civil_to_epoch", &civil_to_epoch);
    m.def("parse_plt", [](const std::string& content) {
        const auto res = parse_plt(content);
        return py::make_tuple(res.records, res.malformed_lines);
    });

    py::class_<AnalyticModel>(m, "AnalyticModel")
        .def(py::init<>())
        .def_readwrite("n", &AnalyticModel::n)
        .def_readwrite("theta0", &AnalyticModel::theta0)
        .def_readwrite("d", &AnalyticModel::d)
        .def_readwrite("sigma_x2", &AnalyticModel::sigma_x2)
        .def_readwrite("sigma_y2", &AnalyticModel::sigma_y2);

    py::enum_<GapMethod>(m, "GapMethod")
        .value("HotdeckOracle", GapMethod::HotdeckOracle)
        .value("LinearInterpolation", GapMethod::LinearInterpolation);

    m.def("expected_gap_hotdeck", &expected_gap_hotdeck);
    m.def("expected_gap_li", &expected_gap_li);
    m.def("monte_carlo_gap", &monte_carlo_gap, py::arg("model"), py::arg("method"),
          py::arg("reps"), py::arg("seed"));
}
