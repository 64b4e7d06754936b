public class Bank {
    private String name;
}
