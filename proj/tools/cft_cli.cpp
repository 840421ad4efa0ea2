#include <cstdio>

int main() {
    std::puts("cft: placeholder");
    return 0;
}
