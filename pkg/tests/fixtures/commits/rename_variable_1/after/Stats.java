public class Stats {
    public double average(int[] values) {
        int runningTotal = 0;
        for (int value : values) {
            runningTotal = runningTotal + value;
        }
        return (double) runningTotal / values.length;
    }

    public int maxOfSums(int[] left, int[] right) {
        int sum = left.length + right.length;
        return sum;
    }
}
