#include "bidisk/profiles.hpp"

#include "bidisk/errors.hpp"

namespace bidisk {

Thresholds tolerancesFor(const std::string& profile) {
  Thresholds t;
  t.name = profile;
  if (profile == "strict") return t;
  if (profile == "singular") {
    t.mass = 1e-5;
    t.poisson = 1e-6;
    t.disintegration = 1e-3;
    t.isometry = 1e-2;
    t.residual = 5e-2;
    return t;
  }
  throw DomainError("unknown tolerance profile '" + profile + "'");
}

Rif rifZW() { return makeRif(BiPoly::constant(1.0), {1, 1}); }

Rif rifFave() { return makeRif(BiPoly(1, 1, {2.0, -1.0, -1.0, 0.0})); }

Rif rifBlaschke2() { return makeRif(BiPoly(1, 1, {4.0, -2.0, -2.0, 1.0})); }

Rif rifCross() { return makeRif(BiPoly(0, 1, {2.0, -1.0}), {1, 0}); }

const std::vector<std::string>& profileNames() {
  static const std::vector<std::string> names{"zw", "fave", "blaschke2", "cross"};
  return names;
}

Profile makeProfile(const std::string& name) {
  Profile pr;
  pr.name = name;
  pr.alpha = cplx(0.0, 1.0);
  pr.tolerance = "strict";
  if (name == "zw") {
    pr.phi = rifZW();
    pr.model = {8, 64, 1024, 2, 0.5, 1e-4};
  } else if (name == "fave") {
    pr.phi = rifFave();
    pr.model = {16, 512, 8192, 2, 0.5, 1e-4};
    pr.tolerance = "singular";
  } else if (name == "blaschke2") {
    pr.phi = rifBlaschke2();
    pr.model = {40, 128, 2048, 2, 0.5, 1e-4};
  } else if (name == "cross") {
    pr.phi = rifCross();
    pr.model = {12, 64, 1024, 2, 0.5, 1e-4};
  } else {
    throw DomainError("unknown profile '" + name + "'");
  }
  return pr;
}

}  // namespace bidisk
