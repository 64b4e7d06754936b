import java.util.List;

public class Loops {
    public int sum(List<Integer> values) {
        int total = 0;
        for (int i = 0; i < values.size(); i++) {
            total = total + values.get(i);
        }
        return total;
    }

    public int count(List<String> words) {
        int total = 0;
        for (String word : words) {
            total = total + word.length();
        }
        return total;
    }
}
