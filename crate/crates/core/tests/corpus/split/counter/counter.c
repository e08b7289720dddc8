int counter = 0;

void bump(int by)
{
  counter += by;
}
