#include <iostream>

#include "regame/acceptance.hpp"

namespace {

void print_details(const regame::acceptance::Report& r) {
  std::cout << "criterion " << r.number << " (" << r.title << ")\n";
  for (const auto& d : r.details) std::cout << "    " << d << "\n";
  std::cout << std::flush;
}

}  // namespace

int main() {
  using namespace regame::acceptance;
  std::vector<Report> verdicts;
  const auto first = run_criteria_1_to_6([&](const Report& r) {
    print_details(r);
    verdicts.push_back(r);
  });
  const Report det = criterion7(first);
  print_details(det);
  verdicts.push_back(det);

  std::cout << "\n";
  bool all = true;
  for (const auto& r : verdicts) {
    std::cout << r.verdict_line() << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
