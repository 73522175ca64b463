#pragma once

#include <stdexcept>
#include <string>

namespace ild {

struct DomainMismatch : std::runtime_error {
    explicit DomainMismatch(const std::string& w) : std::runtime_error("DomainMismatch: " + w) {}
};
struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& w) : std::runtime_error("ShapeMismatch: " + w) {}
};
struct NotATranslation : std::runtime_error {
    explicit NotATranslation(const std::string& w) : std::runtime_error("NotATranslation: " + w) {}
};
struct PreconditionFailed : std::runtime_error {
    explicit PreconditionFailed(const std::string& w) : std::runtime_error("PreconditionFailed: " + w) {}
};
struct UnsupportedAction : std::runtime_error {
    explicit UnsupportedAction(const std::string& w) : std::runtime_error("UnsupportedAction: " + w) {}
};
struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& w) : std::runtime_error("DimensionMismatch: " + w) {}
};
struct SizeCap : std::runtime_error {
    explicit SizeCap(const std::string& w) : std::runtime_error("SizeCap: " + w) {}
};
struct MalformedCategory : std::runtime_error {
    explicit MalformedCategory(const std::string& w) : std::runtime_error("MalformedCategory: " + w) {}
};
struct MalformedLPC : std::runtime_error {
    explicit MalformedLPC(const std::string& w) : std::runtime_error("MalformedLPC: " + w) {}
};
struct NotAFunctor : std::runtime_error {
    explicit NotAFunctor(const std::string& w) : std::runtime_error("NotAFunctor: " + w) {}
};
struct NonSublevelClosed : std::runtime_error {
    explicit NonSublevelClosed(const std::string& w) : std::runtime_error("NonSublevelClosed: " + w) {}
};
struct UnsupportedDegree : std::runtime_error {
    explicit UnsupportedDegree(const std::string& w) : std::runtime_error("UnsupportedDegree: " + w) {}
};
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& w) : std::runtime_error("ParseError: " + w) {}
};

}  // namespace ild
