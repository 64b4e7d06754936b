public class Scanner {
    public Token read(String source, int at) {
        Token token = new Token();
        token.text = source.substring(at, at + 1);
        token.position = at;
        return token;
    }
}

class Token {
    String text;
    int position;
}
