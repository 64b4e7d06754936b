public class Util {
    public static int twice(int v) {
        return v + v;
    }
}

class Helper {
    static int half(int v) {
        return v / 2;
    }
}
