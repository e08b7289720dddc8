int add(int a, int b);
int sub(int a, int b);
_Bool nondet_bool();
unsigned char nondet_uchar();

int main()
{
  int (*op)(int, int) = nondet_bool() ? add : sub;
  int a = nondet_uchar();
  int b = nondet_uchar();
  int r = op(a, b);
  assert(r >= -255);
  assert(r <= 510);
  assert(r != 0);
  return 0;
}
