public class Main {
    public static void main(String[] args) {
        int a = Helper.half(10);
        int b = Helper.half(a);
        System.out.println(b);
        System.out.println(a);
    }
}
