#ifndef ATLAS_ERRORS_HPP
#define ATLAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace atlas {

// Base for all detector errors; carries a stable machine-readable code.
class AtlasError : public std::runtime_error {
  public:
    AtlasError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

#define ATLAS_DEFINE_ERROR(Name)                                   \
    class Name : public AtlasError {                               \
      public:                                                      \
        explicit Name(const std::string& what = #Name)             \
            : AtlasError(#Name, what) {}                           \
    }

ATLAS_DEFINE_ERROR(NonFinite);
ATLAS_DEFINE_ERROR(EmptySeedSet);
ATLAS_DEFINE_ERROR(ResidualTooLarge);
ATLAS_DEFINE_ERROR(ZeroVectorOnCircle);
ATLAS_DEFINE_ERROR(AmbiguousWinding);
ATLAS_DEFINE_ERROR(NotHyperbolic);
ATLAS_DEFINE_ERROR(InvalidEps);
ATLAS_DEFINE_ERROR(NotFoundWithinCap);
ATLAS_DEFINE_ERROR(EmptyCloud);
ATLAS_DEFINE_ERROR(BranchGrowthFailed);
ATLAS_DEFINE_ERROR(ResolutionTooCoarse);
ATLAS_DEFINE_ERROR(InvalidBand);
ATLAS_DEFINE_ERROR(IoError);
ATLAS_DEFINE_ERROR(IntegrityError);
ATLAS_DEFINE_ERROR(InvalidId);
ATLAS_DEFINE_ERROR(ParseError);

#undef ATLAS_DEFINE_ERROR

}  // namespace atlas

#endif
