#pragma once

#include <stdexcept>
#include <string>

namespace bnsl {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BNSL_DEFINE_ERROR(Name)          \
    class Name : public Error {          \
    public:                              \
        using Error::Error;              \
    }

BNSL_DEFINE_ERROR(ParseError);
BNSL_DEFINE_ERROR(EmptyDataset);
BNSL_DEFINE_ERROR(CyclicStructure);
BNSL_DEFINE_ERROR(InvalidStructure);
BNSL_DEFINE_ERROR(ChildInParents);
BNSL_DEFINE_ERROR(ChildInCandidates);
BNSL_DEFINE_ERROR(MissingEmptySet);
BNSL_DEFINE_ERROR(InvalidPartition);
BNSL_DEFINE_ERROR(InvalidConfig);
BNSL_DEFINE_ERROR(TooManyVariables);
BNSL_DEFINE_ERROR(DimensionMismatch);
BNSL_DEFINE_ERROR(BrokenPath);

#undef BNSL_DEFINE_ERROR

}  // namespace bnsl
