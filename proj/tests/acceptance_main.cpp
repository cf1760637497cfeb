#include <iostream>

#include <logtensor/acceptance.hpp>

int main()
{
    bool all = true;
    for (const auto &c : logtensor::run_acceptance()) {
        std::cout << logtensor::criterion_line(c) << std::endl;
        all = all && c.pass;
    }
    return all ? 0 : 1;
}
