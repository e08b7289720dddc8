#define MAX_CLIMB 1
#define CLIMB_PGAIN (-3)
#define CLIMB_IGAIN 1
#define CLIMB_LEVEL_GAZ 3
#define CLIMB_GAZ_OF_CLIMB 7
#define MAX_PPRZ 96
#define CLIMB_PITCH_OF_VZ_PGAIN 5
#define MAX_CLIMB_SUM_ERR 4
#define NAV_PITCH 0

short nondet_short();

short desired_climb, estimator_z_dot;
int desired_gaz, desired_pitch, climb_sum_err;

void climb_pid_run()
{
  int err=estimator_z_dot-desired_climb;

  int fgaz=CLIMB_PGAIN*(err+CLIMB_IGAIN*climb_sum_err)+
             CLIMB_LEVEL_GAZ+CLIMB_GAZ_OF_CLIMB*desired_climb;

  int pprz=fgaz*MAX_PPRZ;
  desired_gaz=((pprz>=0 && pprz<=MAX_PPRZ) ? pprz : (pprz>MAX_PPRZ ? MAX_PPRZ : 0));

  /** pitch offset for climb */
  int pitch_of_vz=(desired_climb>0) ? desired_climb*CLIMB_PITCH_OF_VZ_PGAIN : 0;
  desired_pitch=NAV_PITCH+pitch_of_vz;

  climb_sum_err=err+climb_sum_err;
  if (climb_sum_err>MAX_CLIMB_SUM_ERR) climb_sum_err=MAX_CLIMB_SUM_ERR;
  if (climb_sum_err<-MAX_CLIMB_SUM_ERR) climb_sum_err=-MAX_CLIMB_SUM_ERR;
}

int main()
{
  while(1)
  {
    /** Non-deterministic input values */
    desired_climb=nondet_short();
    estimator_z_dot=nondet_short();

    /** Range of input values */
    __CPROVER_assume(desired_climb>=-MAX_CLIMB && desired_climb<=MAX_CLIMB);
    __CPROVER_assume(estimator_z_dot>=-MAX_CLIMB && estimator_z_dot<=MAX_CLIMB);

    __CPROVER_input("desired_climb", desired_climb);
    __CPROVER_input("estimator_z_dot", estimator_z_dot);

    climb_pid_run();

    __CPROVER_output("desired_gaz", desired_gaz);
    __CPROVER_output("desired_pitch", desired_pitch);
  }
  return 0;
}
