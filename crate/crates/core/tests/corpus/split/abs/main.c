int abs(int x);
int nondet_int();

int main()
{
  int v = nondet_int();
  int r = abs(v);
  assert(r >= 0);
  return r;
}
