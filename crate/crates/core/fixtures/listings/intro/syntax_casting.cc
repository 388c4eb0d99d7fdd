void Convert() {
  double x = 10.3;
  int y;
  y = int (x);    // functional notation
  y = (int) x;    // c-like cast notation
}
