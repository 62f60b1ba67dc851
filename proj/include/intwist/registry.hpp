#ifndef INTWIST_REGISTRY_HPP
#define INTWIST_REGISTRY_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"

namespace intwist {

// Shared variable registry: integration variables (z-vars) followed by
// ground-field parameters. The ordering is fixed at construction; monomial
// orders and exponent vectors depend on it.
class VarRegistry {
public:
    VarRegistry(std::vector<std::string> z_vars, std::vector<std::string> params)
        : z_vars_(std::move(z_vars)), params_(std::move(params)) {
        for (const auto& n : z_vars_) add_name(n);
        for (const auto& n : params_) add_name(n);
    }

    const std::vector<std::string>& z_vars() const { return z_vars_; }
    const std::vector<std::string>& params() const { return params_; }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }

    // Index of a name, -1 if not registered.
    int find(const std::string& n) const {
        auto it = index_.find(n);
        return it == index_.end() ? -1 : it->second;
    }

    int require(const std::string& n) const {
        int i = find(n);
        if (i < 0) throw UndeclaredName("undeclared name: " + n);
        return i;
    }

    bool is_z(std::size_t i) const { return i < z_vars_.size(); }

private:
    void add_name(const std::string& n) {
        if (index_.count(n))
            throw RegistryMismatch("duplicate name in registry: " + n);
        index_[n] = static_cast<int>(names_.size());
        names_.push_back(n);
    }

    std::vector<std::string> z_vars_;
    std::vector<std::string> params_;
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

inline RegistryPtr make_registry(std::vector<std::string> z_vars,
                                 std::vector<std::string> params) {
    return std::make_shared<const VarRegistry>(std::move(z_vars), std::move(params));
}

inline void check_same_registry(const RegistryPtr& a, const RegistryPtr& b) {
    if (a.get() != b.get())
        throw RegistryMismatch("operands built over different registries");
}

}  // namespace intwist

#endif
