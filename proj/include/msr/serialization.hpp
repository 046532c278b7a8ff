#pragma once

#include <json.hpp>
#include <ostream>

#include "msr/adversarial.hpp"
#include "msr/bounds.hpp"
#include "msr/forward_model.hpp"
#include "msr/illumination.hpp"
#include "msr/incoherence.hpp"
#include "msr/measure.hpp"
#include "msr/projection2d.hpp"
#include "msr/recovery.hpp"

namespace msr {

using Json = nlohmann::json;

Json to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const Json& j);

Json to_json(const SpeckleGrid& g);
SpeckleGrid speckle_from_json(const Json& j);

Json to_json(const FrequencyGrid& g);
FrequencyGrid grid_from_json(const Json& j);

/// Frames are stored as interleaved [re0, im0, re1, im1, ...] arrays.
Json to_json(const MeasurementSet& ms);
MeasurementSet measurements_from_json(const Json& j);

/// One row per (frame, node): t,omega_x,omega_y,re,im
void write_csv(std::ostream& os, const MeasurementSet& ms);

Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j);

Json to_json(const IncoherenceReport& r);
Json to_json(const BoundReport& r);
Json to_json(const CombinatorialReport& r);
Json to_json(const AdversarialInstance& a);
Json to_json(const DirectionFan& f);
Json to_json(const Certificate& c);
Json to_json(const RecoveryResult& r);

}  // namespace msr
