#pragma once

#include <stdexcept>
#include <string>

namespace captchalab {

// Root of every error thrown by the library. Subclasses name the failing
// subsystem so callers (the CLI, the HTTP service) can map them to exit
// codes and status codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CAPTCHALAB_DEFINE_ERROR(Name)         \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

CAPTCHALAB_DEFINE_ERROR(CodecError);
CAPTCHALAB_DEFINE_ERROR(PlacementError);
CAPTCHALAB_DEFINE_ERROR(SegmentationError);
CAPTCHALAB_DEFINE_ERROR(AtlasError);
CAPTCHALAB_DEFINE_ERROR(RenderError);
CAPTCHALAB_DEFINE_ERROR(SpecError);
CAPTCHALAB_DEFINE_ERROR(ModelError);
CAPTCHALAB_DEFINE_ERROR(TrainingError);
CAPTCHALAB_DEFINE_ERROR(BreakError);
CAPTCHALAB_DEFINE_ERROR(DomainError);
CAPTCHALAB_DEFINE_ERROR(InputError);
CAPTCHALAB_DEFINE_ERROR(GenerationError);
CAPTCHALAB_DEFINE_ERROR(RequestError);
CAPTCHALAB_DEFINE_ERROR(PersistenceError);
CAPTCHALAB_DEFINE_ERROR(LoadError);
CAPTCHALAB_DEFINE_ERROR(EmptyReportError);

#undef CAPTCHALAB_DEFINE_ERROR

}  // namespace captchalab
