#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snnmoo {

/// Raised when a neuron's state stops being finite during integration.
class NumericalDivergence : public std::runtime_error {
public:
    NumericalDivergence(std::size_t neuron, long tick)
        : std::runtime_error("numerical divergence at neuron " + std::to_string(neuron) + ", tick " +
                             std::to_string(tick)),
          neuron_(neuron),
          tick_(tick) {}

    std::size_t neuron() const noexcept { return neuron_; }
    long tick() const noexcept { return tick_; }

private:
    std::size_t neuron_;
    long tick_;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace snnmoo
