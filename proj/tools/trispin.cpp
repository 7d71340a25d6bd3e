#include <cstdio>
int main() { std::puts("trispin cli placeholder"); return 0; }
