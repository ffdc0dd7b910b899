#pragma once

#include <string>
#include <vector>

#include "bidisk/modelspace.hpp"
#include "bidisk/rif.hpp"

namespace bidisk {

struct Thresholds {
  std::string name;
  double mass = 1e-8;
  double poisson = 1e-8;
  double disintegration = 1e-6;
  double isometry = 1e-4;
  double residual = 1e-6;       // unitarity, commutation, intertwining
  double epsilonFitR2 = 0.95;
};

Thresholds tolerancesFor(const std::string& profile);  // "strict" or "singular"

struct Profile {
  std::string name;
  Rif phi;
  cplx alpha;          // default generic value
  ModelConfig model;   // verify-level refinement
  int scanGrid = 256;
  std::string tolerance;
};

// zw, fave, blaschke2, cross
Profile makeProfile(const std::string& name);
const std::vector<std::string>& profileNames();

Rif rifZW();
Rif rifFave();
Rif rifBlaschke2();
Rif rifCross();  // z1 (2 z2 - 1) / (2 - z2)

}  // namespace bidisk
