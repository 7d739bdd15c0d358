// Line-protocol stub that drops the last row.
#include <iostream>
#include <string>
#include <vector>

int main() {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) lines.push_back(line);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) std::cout << "1.0\n";
}
