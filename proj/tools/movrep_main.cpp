#include <iostream>

int main() {
    std::cout << "movrep: commands pending\n";
    return 2;
}
