#include "qpfi/verify.hpp"

#include <iostream>

int main() {
    bool ok = true;
    for (const auto& r : qpfi::verify::run_suite("all")) {
        qpfi::verify::print(std::cout, r);
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all acceptance criteria passed" : "some acceptance criteria failed") << std::endl;
    return ok ? 0 : 1;
}
