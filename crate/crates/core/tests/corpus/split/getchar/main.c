int read_digit();

int main()
{
  int d = read_digit();
  int e = read_digit();
  assert(d < 10);
  assert(d + e != 17);
  return 0;
}
