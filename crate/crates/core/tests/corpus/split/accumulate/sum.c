unsigned sum_to(unsigned n)
{
  unsigned s = 0;
  while(n > 0)
  {
    s += n;
    n--;
  }
  return s;
}
