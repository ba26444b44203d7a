#pragma once

#include <span>

#include "mobimpute/trace.hpp"

namespace mobimpute {

/// Partition a sorted planar point sequence into flights and pauses
/// (rectangular method) plus an explicit missing-interval list. Throws
/// std::invalid_argument("unsorted") if timestamps decrease.
MobilityTrace extract_events(std::span<const PlanarPoint> points,
                             const SegmentationConfig& cfg);

/// Inter-point gaps longer than cfg.gap_threshold_s, with flanking anchors.
std::vector<MissingInterval> detect_missing_intervals(
    std::span<const PlanarPoint> points, const SegmentationConfig& cfg);

/// Replace any gap flanked by two pauses within cfg.pause_merge_m by one
/// longer pause at their duration-weighted mean location. The absorbed gap
/// durations move to trace.merged_gaps for missing-time accounting.
MobilityTrace merge_pause_flanked_gaps(const MobilityTrace& trace,
                                       const SegmentationConfig& cfg);

}  // namespace mobimpute
