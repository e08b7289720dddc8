int getchar();

int read_digit()
{
  int c = getchar();
  if(c >= '0' && c <= '9')
    return c - '0';
  return -1;
}
