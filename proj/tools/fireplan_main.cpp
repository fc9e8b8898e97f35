#include <cstdio>

int main() {
    std::puts("fireplan CLI: not wired up yet");
    return 0;
}
