#pragma once

#include <stdexcept>
#include <string>

namespace certify {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// coeff
struct NonInvertibleSigma : Error { using Error::Error; };
struct InsufficientSmoothness : Error { using Error::Error; };
struct VanishingDerivative : Error { using Error::Error; };
struct DegenerateDilatation : Error { using Error::Error; };

// geometry
struct MeshDegenerate : Error { using Error::Error; };
struct SelfIntersecting : Error { using Error::Error; };
struct OrientationReversed : Error { using Error::Error; };
struct DegenerateTangent : Error { using Error::Error; };

// solver
struct SingularSystem : Error { using Error::Error; };
struct SolverDiverged : Error { using Error::Error; };

// conjugate
struct NonClosedForm : Error { using Error::Error; };

// topology
struct UnderSampled : Error { using Error::Error; };
struct BoundaryCritical : Error { using Error::Error; };
struct VanishingGradient : Error { using Error::Error; };

// cli
struct ScenarioError : Error { using Error::Error; };
struct ExprError : Error { using Error::Error; };

} // namespace certify
