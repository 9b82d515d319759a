#pragma once

#include <stdexcept>
#include <string>

namespace fpmech {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FPMECH_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                          \
        explicit Name(const std::string& msg) : Error(msg) {}      \
    }

// ingest
FPMECH_DEFINE_ERROR(MalformedRecord);
FPMECH_DEFINE_ERROR(EmptyStructure);
FPMECH_DEFINE_ERROR(MissingColumn);
FPMECH_DEFINE_ERROR(InvalidQy);
FPMECH_DEFINE_ERROR(SequenceTooShort);
// chromophore
FPMECH_DEFINE_ERROR(NoChromophore);
FPMECH_DEFINE_ERROR(MissingRegionAtoms);
// graph
FPMECH_DEFINE_ERROR(EmptyLocalNeighbourhood);
// model
FPMECH_DEFINE_ERROR(InsufficientBandData);
FPMECH_DEFINE_ERROR(NoModelForBand);
// evaluate
FPMECH_DEFINE_ERROR(TooFewSamples);
FPMECH_DEFINE_ERROR(DegenerateTarget);
// cli
FPMECH_DEFINE_ERROR(MissingFeatureTable);
FPMECH_DEFINE_ERROR(ConfigMismatch);

#undef FPMECH_DEFINE_ERROR

}  // namespace fpmech
